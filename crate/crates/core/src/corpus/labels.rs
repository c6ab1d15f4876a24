use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Horizontal (left/right) placement of a portal on the rating chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoliticalPlacement {
    MostExtremeLeft,
    HyperpartisanLeft,
    SkewLeft,
    Neutral,
    SkewRight,
    HyperpartisanRight,
    MostExtremeRight,
}

/// Vertical (reliability) placement of a portal on the rating chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FairnessPlacement {
    OriginalFactReporting,
    FactReporting,
    MixFactAnalysis,
    Analysis,
    Opinion,
    SelectiveStory,
    Propaganda,
    FabricatedInfo,
}

impl PoliticalPlacement {
    pub const ALL: [PoliticalPlacement; 7] = [
        PoliticalPlacement::MostExtremeLeft,
        PoliticalPlacement::HyperpartisanLeft,
        PoliticalPlacement::SkewLeft,
        PoliticalPlacement::Neutral,
        PoliticalPlacement::SkewRight,
        PoliticalPlacement::HyperpartisanRight,
        PoliticalPlacement::MostExtremeRight,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PoliticalPlacement::MostExtremeLeft => "most_extreme_left",
            PoliticalPlacement::HyperpartisanLeft => "hyperpartisan_left",
            PoliticalPlacement::SkewLeft => "skew_left",
            PoliticalPlacement::Neutral => "neutral",
            PoliticalPlacement::SkewRight => "skew_right",
            PoliticalPlacement::HyperpartisanRight => "hyperpartisan_right",
            PoliticalPlacement::MostExtremeRight => "most_extreme_right",
        }
    }

    /// Extreme and hyperpartisan placements on either side count as biased.
    pub fn is_biased(self) -> bool {
        matches!(
            self,
            PoliticalPlacement::MostExtremeLeft
                | PoliticalPlacement::HyperpartisanLeft
                | PoliticalPlacement::HyperpartisanRight
                | PoliticalPlacement::MostExtremeRight
        )
    }
}

impl FairnessPlacement {
    pub const ALL: [FairnessPlacement; 8] = [
        FairnessPlacement::OriginalFactReporting,
        FairnessPlacement::FactReporting,
        FairnessPlacement::MixFactAnalysis,
        FairnessPlacement::Analysis,
        FairnessPlacement::Opinion,
        FairnessPlacement::SelectiveStory,
        FairnessPlacement::Propaganda,
        FairnessPlacement::FabricatedInfo,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FairnessPlacement::OriginalFactReporting => "original_fact_reporting",
            FairnessPlacement::FactReporting => "fact_reporting",
            FairnessPlacement::MixFactAnalysis => "mix_fact_analysis",
            FairnessPlacement::Analysis => "analysis",
            FairnessPlacement::Opinion => "opinion",
            FairnessPlacement::SelectiveStory => "selective_story",
            FairnessPlacement::Propaganda => "propaganda",
            FairnessPlacement::FabricatedInfo => "fabricated_info",
        }
    }

    pub fn is_unfair(self) -> bool {
        matches!(
            self,
            FairnessPlacement::SelectiveStory
                | FairnessPlacement::Propaganda
                | FairnessPlacement::FabricatedInfo
        )
    }
}

impl FromStr for PoliticalPlacement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PoliticalPlacement::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown political placement {s:?}")))
    }
}

impl FromStr for FairnessPlacement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FairnessPlacement::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown fairness placement {s:?}")))
    }
}

impl fmt::Display for PoliticalPlacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for FairnessPlacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The three binary targets. Every classifier in the crate is trained on
/// exactly one of these.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BiasType {
    PoliticalBias,
    Unfairness,
    NonObjectivity,
}

impl BiasType {
    pub const ALL: [BiasType; 3] = [
        BiasType::PoliticalBias,
        BiasType::Unfairness,
        BiasType::NonObjectivity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BiasType::PoliticalBias => "political_bias",
            BiasType::Unfairness => "unfairness",
            BiasType::NonObjectivity => "non_objectivity",
        }
    }

    /// Short name used on the command line.
    pub fn cli_name(self) -> &'static str {
        match self {
            BiasType::PoliticalBias => "bias",
            BiasType::Unfairness => "fairness",
            BiasType::NonObjectivity => "objectivity",
        }
    }
}

impl FromStr for BiasType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BiasType::ALL
            .into_iter()
            .find(|t| t.as_str() == s || t.cli_name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown bias type {s:?}")))
    }
}

impl fmt::Display for BiasType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BiasLabels {
    pub political_bias: bool,
    pub unfairness: bool,
    pub non_objectivity: bool,
}

impl BiasLabels {
    pub fn get(&self, bias_type: BiasType) -> bool {
        match bias_type {
            BiasType::PoliticalBias => self.political_bias,
            BiasType::Unfairness => self.unfairness,
            BiasType::NonObjectivity => self.non_objectivity,
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.non_objectivity == (self.political_bias || self.unfairness)
    }
}

/// Derive the three bias labels of a portal from its two chart placements.
pub fn derive_labels(political: PoliticalPlacement, fairness: FairnessPlacement) -> BiasLabels {
    let political_bias = political.is_biased();
    let unfairness = fairness.is_unfair();
    BiasLabels {
        political_bias,
        unfairness,
        non_objectivity: political_bias || unfairness,
    }
}
