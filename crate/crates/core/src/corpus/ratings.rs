use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::labels::{derive_labels, BiasLabels, FairnessPlacement, PoliticalPlacement};
use crate::error::{Error, Result};

const DEFAULT_NORMALIZATION: &str = include_str!("../../data/placement_normalization.csv");

/// Case-fold, trim and collapse internal whitespace. Used for portal names
/// and for raw placement strings.
pub fn canonical_name(raw: &str) -> String {
    raw.split_whitespace()
        .map(|w| w.to_lowercase())
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortalRating {
    pub portal_name: String,
    pub political_placement: PoliticalPlacement,
    pub fairness_placement: FairnessPlacement,
    pub aliases: Vec<String>,
}

impl PortalRating {
    pub fn labels(&self) -> BiasLabels {
        derive_labels(self.political_placement, self.fairness_placement)
    }
}

/// Raw-string to enum lookup for both chart axes. The default table ships
/// in `data/placement_normalization.csv`; a replacement can be loaded from
/// disk without touching code.
#[derive(Clone, Debug)]
pub struct PlacementNormalization {
    political: HashMap<String, PoliticalPlacement>,
    fairness: HashMap<String, FairnessPlacement>,
}

impl Default for PlacementNormalization {
    fn default() -> Self {
        Self::parse(DEFAULT_NORMALIZATION, "placement_normalization.csv")
            .expect("bundled normalization table is valid")
    }
}

impl PlacementNormalization {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, file: &str) -> Result<Self> {
        let mut political = HashMap::new();
        let mut fairness = HashMap::new();
        for p in PoliticalPlacement::ALL {
            political.insert(p.as_str().to_string(), p);
        }
        for f in FairnessPlacement::ALL {
            fairness.insert(f.as_str().to_string(), f);
        }
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.splitn(3, ',').collect();
            if fields.len() != 3 {
                return Err(Error::parse(file, idx + 1, "expected axis,raw,canonical"));
            }
            let raw = canonical_name(fields[1]);
            match fields[0].trim() {
                "political" => {
                    let p = fields[2]
                        .trim()
                        .parse()
                        .map_err(|e: Error| Error::parse(file, idx + 1, e.to_string()))?;
                    political.insert(raw, p);
                }
                "fairness" => {
                    let f = fields[2]
                        .trim()
                        .parse()
                        .map_err(|e: Error| Error::parse(file, idx + 1, e.to_string()))?;
                    fairness.insert(raw, f);
                }
                other => {
                    return Err(Error::parse(file, idx + 1, format!("unknown axis {other:?}")));
                }
            }
        }
        Ok(Self {
            political,
            fairness,
        })
    }

    pub fn political(&self, raw: &str) -> Option<PoliticalPlacement> {
        self.political.get(&canonical_name(raw)).copied()
    }

    pub fn fairness(&self, raw: &str) -> Option<FairnessPlacement> {
        self.fairness.get(&canonical_name(raw)).copied()
    }
}

/// Ratings keyed by canonical portal name.
#[derive(Clone, Debug, Default)]
pub struct RatingsTable {
    ratings: BTreeMap<String, PortalRating>,
}

#[derive(Debug, Deserialize)]
struct RatingRecord {
    portal: String,
    political_placement: String,
    fairness_placement: String,
    #[serde(default)]
    aliases: String,
}

impl RatingsTable {
    pub fn load(path: &Path) -> Result<Self> {
        Self::load_with(path, &PlacementNormalization::default())
    }

    pub fn load_with(path: &Path, normalization: &PlacementNormalization) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(file, &path.display().to_string(), normalization)
    }

    pub fn from_reader<R: std::io::Read>(
        reader: R,
        file: &str,
        normalization: &PlacementNormalization,
    ) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut table = RatingsTable::default();
        for (idx, record) in rdr.deserialize::<RatingRecord>().enumerate() {
            // header is line 1
            let line = idx + 2;
            let record = record.map_err(|e| Error::parse(file, line, e.to_string()))?;
            let portal_name = canonical_name(&record.portal);
            if portal_name.is_empty() {
                return Err(Error::parse(file, line, "empty portal name"));
            }
            let political_placement = normalization
                .political(&record.political_placement)
                .ok_or_else(|| {
                    Error::parse(
                        file,
                        line,
                        format!("unknown political placement {:?}", record.political_placement),
                    )
                })?;
            let fairness_placement =
                normalization.fairness(&record.fairness_placement).ok_or_else(|| {
                    Error::parse(
                        file,
                        line,
                        format!("unknown fairness placement {:?}", record.fairness_placement),
                    )
                })?;
            let mut aliases: Vec<String> = record
                .aliases
                .split(';')
                .map(str::trim)
                .filter(|a| !a.is_empty())
                .map(str::to_string)
                .collect();
            if aliases.is_empty() {
                aliases.push(record.portal.trim().to_string());
            }
            let rating = PortalRating {
                portal_name: portal_name.clone(),
                political_placement,
                fairness_placement,
                aliases,
            };
            if table.ratings.insert(portal_name.clone(), rating).is_some() {
                return Err(Error::parse(file, line, format!("duplicate portal {portal_name:?}")));
            }
        }
        Ok(table)
    }

    pub fn insert(&mut self, rating: PortalRating) -> Result<()> {
        let key = canonical_name(&rating.portal_name);
        if key.is_empty() {
            return Err(Error::Invalid("empty portal name".into()));
        }
        if self.ratings.contains_key(&key) {
            return Err(Error::Invalid(format!("duplicate portal {key:?}")));
        }
        self.ratings.insert(
            key.clone(),
            PortalRating {
                portal_name: key,
                ..rating
            },
        );
        Ok(())
    }

    pub fn get(&self, portal: &str) -> Option<&PortalRating> {
        self.ratings.get(&canonical_name(portal))
    }

    pub fn len(&self) -> usize {
        self.ratings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &PortalRating> {
        self.ratings.values()
    }
}
