//! Train/test protocols and classification metrics.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::elm::LabelEncoding;
use crate::{Error, Result};

/// Identity of one recorded clip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SampleMeta {
    pub subject_id: u32,
    pub action_label: u32,
    pub repetition: u32,
}

/// The three eight-action subsets of MSRAction3D.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ActionSubset {
    AS1,
    AS2,
    AS3,
}

impl ActionSubset {
    pub fn labels(self) -> &'static [u32; 8] {
        match self {
            ActionSubset::AS1 => &[2, 3, 5, 6, 10, 13, 18, 20],
            ActionSubset::AS2 => &[1, 4, 7, 8, 9, 11, 12, 14],
            ActionSubset::AS3 => &[4, 6, 15, 16, 17, 18, 19, 20],
        }
    }

    pub fn contains(self, label: u32) -> bool {
        self.labels().contains(&label)
    }

    pub fn name(self) -> &'static str {
        match self {
            ActionSubset::AS1 => "AS1",
            ActionSubset::AS2 => "AS2",
            ActionSubset::AS3 => "AS3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Protocol {
    /// Odd subjects train, even subjects test.
    CrossSubjectOddEven,
    /// Per class, the first third (in subject, repetition order) trains.
    SubsetTest1,
    /// Per class, the first two thirds train.
    SubsetTest2,
    /// Cross-subject inside the subset.
    SubsetTest3,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::CrossSubjectOddEven => "cross_subject",
            Protocol::SubsetTest1 => "subset_test1",
            Protocol::SubsetTest2 => "subset_test2",
            Protocol::SubsetTest3 => "subset_test3",
        }
    }

    fn is_subset_test(self) -> bool {
        !matches!(self, Protocol::CrossSubjectOddEven)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SplitSpec {
    pub protocol: Protocol,
    pub subset: Option<ActionSubset>,
}

impl SplitSpec {
    pub fn cross_subject() -> Self {
        Self { protocol: Protocol::CrossSubjectOddEven, subset: None }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.protocol.is_subset_test(), self.subset.is_some()) {
            (true, false) => Err(Error::InvalidConfig(format!("protocol {} needs an action subset", self.protocol.name()))),
            (false, true) => Err(Error::InvalidConfig("cross_subject takes no action subset".into())),
            _ => Ok(()),
        }
    }
}

/// Indices into the dataset, each side in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Partitions the (subset-filtered) samples. Deterministic; `seed` is part of
/// the signature for protocols that might shuffle, and none currently do.
pub fn split(meta: &[SampleMeta], spec: &SplitSpec, _seed: u64) -> Result<Split> {
    spec.validate()?;
    let kept: Vec<usize> = (0..meta.len())
        .filter(|&i| spec.subset.is_none_or(|s| s.contains(meta[i].action_label)))
        .collect();
    let (mut train, mut test) = (Vec::new(), Vec::new());
    match spec.protocol {
        Protocol::CrossSubjectOddEven | Protocol::SubsetTest3 => {
            for i in kept {
                if meta[i].subject_id % 2 == 1 {
                    train.push(i);
                } else {
                    test.push(i);
                }
            }
        }
        Protocol::SubsetTest1 | Protocol::SubsetTest2 => {
            let (num, den) = if spec.protocol == Protocol::SubsetTest1 { (1, 3) } else { (2, 3) };
            let mut labels: Vec<u32> = kept.iter().map(|&i| meta[i].action_label).collect();
            labels.sort_unstable();
            labels.dedup();
            for label in labels {
                let mut members: Vec<usize> = kept.iter().copied().filter(|&i| meta[i].action_label == label).collect();
                members.sort_by_key(|&i| (meta[i].subject_id, meta[i].repetition, i));
                let cut = (members.len() * num).div_ceil(den);
                train.extend_from_slice(&members[..cut]);
                test.extend_from_slice(&members[cut..]);
            }
        }
    }
    train.sort_unstable();
    test.sort_unstable();
    if train.is_empty() {
        return Err(Error::EmptySplit("train"));
    }
    if test.is_empty() {
        return Err(Error::EmptySplit("test"));
    }
    let train_classes = LabelEncoding::from_labels(&train.iter().map(|&i| meta[i].action_label).collect::<Vec<_>>());
    if train_classes.len() < 2 {
        return Err(Error::TooFewClasses(train_classes.len()));
    }
    Ok(Split { train, test })
}

/// Counts with rows = true class, columns = predicted class.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConfusionMatrix {
    pub classes: Vec<u32>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..self.classes.len()).map(|k| self.counts[k][k]).sum()
    }

    /// `trace / total`; 0 for an empty matrix.
    pub fn accuracy(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            0.0
        } else {
            self.correct() as f64 / total as f64
        }
    }

    /// Recall of each class, `None` for classes without test samples.
    pub fn per_class_accuracy(&self) -> Vec<Option<f64>> {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, row)| {
                let n: u64 = row.iter().sum();
                (n > 0).then(|| row[k] as f64 / n as f64)
            })
            .collect()
    }
}

/// Tallies predictions against truths over the given class map.
pub fn confusion(predictions: &[u32], truths: &[u32], classes: &LabelEncoding) -> Result<ConfusionMatrix> {
    if predictions.len() != truths.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} predictions", truths.len()),
            found: format!("{}", predictions.len()),
        });
    }
    let m = classes.len();
    let mut counts = vec![vec![0u64; m]; m];
    for (&p, &t) in predictions.iter().zip(truths) {
        counts[classes.index_of(t)?][classes.index_of(p)?] += 1;
    }
    Ok(ConfusionMatrix { classes: classes.classes().to_vec(), counts })
}
