use thiserror::Error;

use super::Dtmc;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SampleError {
    #[error("sample needs at least one positive chain")]
    NoPositives,
    #[error("sample needs at least one negative chain")]
    NoNegatives,
    #[error("sample proposition list is empty")]
    EmptyAp,
}

/// Positive and negative chains over a shared proposition universe.
#[derive(Debug, Clone)]
pub struct Sample {
    ap: Vec<String>,
    positives: Vec<Dtmc>,
    negatives: Vec<Dtmc>,
}

impl Sample {
    /// Every chain is projected onto `ap`.
    pub fn new(
        ap: Vec<String>,
        positives: Vec<Dtmc>,
        negatives: Vec<Dtmc>,
    ) -> Result<Self, SampleError> {
        if ap.is_empty() {
            return Err(SampleError::EmptyAp);
        }
        if positives.is_empty() {
            return Err(SampleError::NoPositives);
        }
        if negatives.is_empty() {
            return Err(SampleError::NoNegatives);
        }
        let project = |ms: Vec<Dtmc>| ms.iter().map(|m| m.project(&ap)).collect();
        Ok(Sample {
            positives: project(positives),
            negatives: project(negatives),
            ap,
        })
    }

    pub fn ap(&self) -> &[String] {
        &self.ap
    }

    pub fn positives(&self) -> &[Dtmc] {
        &self.positives
    }

    pub fn negatives(&self) -> &[Dtmc] {
        &self.negatives
    }

    pub fn len(&self) -> usize {
        self.positives.len() + self.negatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All chains, positives first, each tagged `true` when positive.
    pub fn chains(&self) -> impl Iterator<Item = (bool, &Dtmc)> {
        self.positives
            .iter()
            .map(|m| (true, m))
            .chain(self.negatives.iter().map(|m| (false, m)))
    }

    /// Same sample with the classes exchanged.
    pub fn swapped(&self) -> Sample {
        Sample {
            ap: self.ap.clone(),
            positives: self.negatives.clone(),
            negatives: self.positives.clone(),
        }
    }
}
