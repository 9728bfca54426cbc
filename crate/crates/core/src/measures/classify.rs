use std::fmt;

use serde::Serialize;

use super::discord::{DiscordOptimizer, DiscordVector};
use super::entanglement::is_entangled_with;
use super::Tolerances;
use crate::error::Result;
use crate::states::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Label {
    /// Nonlocal quantumness: fails the PPT test.
    Entangled,
    /// Separable but with a nonzero discord component.
    LocalQuantumnessOnly,
    /// Separable with both discords zero.
    ClassicalOrProduct,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Entangled => "Entangled",
            Label::LocalQuantumnessOnly => "LocalQuantumnessOnly",
            Label::ClassicalOrProduct => "ClassicalOrProduct",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A label together with the evidence it was derived from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassificationLabel {
    pub label: Label,
    pub is_entangled: bool,
    pub discord: DiscordVector,
}

impl ClassificationLabel {
    pub fn from_evidence(is_entangled: bool, discord: DiscordVector, zero_tol: f64) -> Self {
        let label = if is_entangled {
            Label::Entangled
        } else if discord.max() > zero_tol {
            Label::LocalQuantumnessOnly
        } else {
            Label::ClassicalOrProduct
        };
        ClassificationLabel {
            label,
            is_entangled,
            discord,
        }
    }

    /// Whether the label follows from the recorded evidence.
    pub fn is_consistent(&self, zero_tol: f64) -> bool {
        Self::from_evidence(self.is_entangled, self.discord, zero_tol).label == self.label
    }
}

pub fn classify(rho: &DensityMatrix) -> Result<ClassificationLabel> {
    classify_with(rho, &Tolerances::default(), &DiscordOptimizer::default())
}

pub fn classify_with(
    rho: &DensityMatrix,
    tol: &Tolerances,
    optimizer: &DiscordOptimizer,
) -> Result<ClassificationLabel> {
    let entangled = is_entangled_with(rho, tol.psd_tol)?;
    let (discord, _) = optimizer.discord_vector(rho)?;
    Ok(ClassificationLabel::from_evidence(entangled, discord, tol.zero_tol))
}
