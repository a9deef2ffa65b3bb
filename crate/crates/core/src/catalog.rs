//! Feature-annotation catalogs: datasets, their columns, and the ontology
//! term (if any) each column was mapped to.
//!
//! Term ids are recorded as given; they are checked against an ontology only
//! when a similarity computation touches them.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ontology::TermId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Category {
    Survey,
    #[serde(rename = "EHR")]
    Ehr,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Survey => "Survey",
            Category::Ehr => "EHR",
        })
    }
}

impl Category {
    fn parse(raw: &str) -> Option<Self> {
        match raw {
            "Survey" => Some(Category::Survey),
            "EHR" => Some(Category::Ehr),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeatureRecord {
    pub name: String,
    pub term: Option<TermId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DatasetRecord {
    pub id: String,
    pub name: String,
    pub origin: Vec<String>,
    pub category: Category,
    pub features: Vec<FeatureRecord>,
}

impl DatasetRecord {
    /// Distinct annotating terms; unannotated features contribute nothing.
    pub fn term_set(&self) -> BTreeSet<TermId> {
        self.features
            .iter()
            .filter_map(|f| f.term.clone())
            .collect()
    }

    pub fn annotated_count(&self) -> usize {
        self.features.iter().filter(|f| f.term.is_some()).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnotationCatalog {
    ontology_version: String,
    datasets: Vec<DatasetRecord>,
}

// Loose mirror of the schema; semantic checks happen in `validate`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    ontology_version: String,
    datasets: Vec<RawDataset>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDataset {
    id: String,
    name: String,
    origin: Vec<String>,
    category: String,
    features: Vec<RawFeature>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFeature {
    name: String,
    term: Option<String>,
}

fn violation(path: String, message: &str) -> Error {
    Error::SchemaViolation {
        path,
        message: message.to_owned(),
    }
}

impl AnnotationCatalog {
    pub fn new(ontology_version: impl Into<String>, datasets: Vec<DatasetRecord>) -> Result<Self> {
        let catalog = AnnotationCatalog {
            ontology_version: ontology_version.into(),
            datasets,
        };
        catalog.validate()?;
        Ok(catalog)
    }

    pub fn from_reader<R: Read>(input: R) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_reader(input);
        let raw: RawCatalog = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            violation(path, &e.into_inner().to_string())
        })?;
        de.end()
            .map_err(|e| violation(".".into(), &e.to_string()))?;

        let mut datasets = Vec::with_capacity(raw.datasets.len());
        for (i, d) in raw.datasets.into_iter().enumerate() {
            let category = Category::parse(&d.category).ok_or_else(|| Error::UnknownCategory {
                dataset: d.id.clone(),
                category: d.category.clone(),
            })?;
            let mut features = Vec::with_capacity(d.features.len());
            for (j, f) in d.features.into_iter().enumerate() {
                let term = match f.term {
                    None => None,
                    Some(t) => Some(TermId::new(t).map_err(|_| {
                        violation(format!("datasets[{i}].features[{j}].term"), "empty term id")
                    })?),
                };
                features.push(FeatureRecord { name: f.name, term });
            }
            datasets.push(DatasetRecord {
                id: d.id,
                name: d.name,
                origin: d.origin,
                category,
                features,
            });
        }
        AnnotationCatalog::new(raw.ontology_version, datasets)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_reader(text.as_bytes())
    }

    /// Canonical pretty-printed JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serialization is infallible")
    }

    fn validate(&self) -> Result<()> {
        let mut ids = HashSet::new();
        for (i, d) in self.datasets.iter().enumerate() {
            if d.id.trim().is_empty() {
                return Err(violation(
                    format!("datasets[{i}].id"),
                    "dataset id must be non-empty",
                ));
            }
            if !ids.insert(d.id.as_str()) {
                return Err(Error::DuplicateDatasetId(d.id.clone()));
            }
            if d.features.is_empty() {
                return Err(violation(
                    format!("datasets[{i}].features"),
                    "a dataset needs at least one feature",
                ));
            }
            let mut names = HashSet::new();
            for (j, f) in d.features.iter().enumerate() {
                if f.name.is_empty() {
                    return Err(violation(
                        format!("datasets[{i}].features[{j}].name"),
                        "feature name must be non-empty",
                    ));
                }
                if !names.insert(f.name.as_str()) {
                    return Err(Error::DuplicateFeatureName {
                        dataset: d.id.clone(),
                        name: f.name.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn ontology_version(&self) -> &str {
        &self.ontology_version
    }

    pub fn datasets(&self) -> &[DatasetRecord] {
        &self.datasets
    }

    pub fn dataset(&self, id: &str) -> Result<&DatasetRecord> {
        self.datasets
            .iter()
            .find(|d| d.id == id)
            .ok_or_else(|| Error::UnknownDataset(id.to_owned()))
    }

    pub fn term_set(&self, dataset_id: &str) -> Result<BTreeSet<TermId>> {
        Ok(self.dataset(dataset_id)?.term_set())
    }

    /// Every annotating term in order of first occurrence.
    pub fn annotated_terms(&self) -> Vec<TermId> {
        let mut seen = HashSet::new();
        self.datasets
            .iter()
            .flat_map(|d| &d.features)
            .filter_map(|f| f.term.as_ref())
            .filter(|t| seen.insert(*t))
            .cloned()
            .collect()
    }

    pub fn coverage_stats(&self) -> CoverageStats {
        let datasets: Vec<DatasetCoverage> = self
            .datasets
            .iter()
            .map(|d| {
                let feature_count = d.features.len();
                let annotated_count = d.annotated_count();
                DatasetCoverage {
                    id: d.id.clone(),
                    name: d.name.clone(),
                    origin: d.origin.clone(),
                    category: d.category,
                    feature_count,
                    annotated_count,
                    coverage_fraction: annotated_count as f64 / feature_count as f64,
                }
            })
            .collect();

        let mut names = HashSet::new();
        let mut annotated_names = HashSet::new();
        let mut terms = HashSet::new();
        for f in self.datasets.iter().flat_map(|d| &d.features) {
            names.insert(f.name.as_str());
            if let Some(t) = &f.term {
                annotated_names.insert(f.name.as_str());
                terms.insert(t);
            }
        }
        let total_feature_count: usize = datasets.iter().map(|d| d.feature_count).sum();
        let total_annotated_count: usize = datasets.iter().map(|d| d.annotated_count).sum();
        CoverageStats {
            datasets,
            total_feature_count,
            total_annotated_count,
            distinct_feature_name_count: names.len(),
            distinct_annotated_name_count: annotated_names.len(),
            distinct_term_count: terms.len(),
            global_coverage_fraction: if total_feature_count == 0 {
                0.0
            } else {
                total_annotated_count as f64 / total_feature_count as f64
            },
        }
    }

    /// Per-term dataset counts and name variants, most widespread first.
    pub fn term_frequency_report(&self) -> Vec<TermFrequency> {
        struct Acc<'a> {
            datasets: BTreeSet<usize>,
            names: Vec<&'a str>,
        }
        let mut acc: BTreeMap<&TermId, Acc> = BTreeMap::new();
        for (i, d) in self.datasets.iter().enumerate() {
            for f in &d.features {
                let Some(t) = &f.term else { continue };
                let e = acc.entry(t).or_insert_with(|| Acc {
                    datasets: BTreeSet::new(),
                    names: Vec::new(),
                });
                e.datasets.insert(i);
                if !e.names.contains(&f.name.as_str()) {
                    e.names.push(&f.name);
                }
            }
        }
        let mut rows: Vec<TermFrequency> = acc
            .into_iter()
            .map(|(t, a)| TermFrequency {
                term: t.clone(),
                dataset_count: a.datasets.len(),
                unique_name_count: a.names.len(),
                example_names: a.names.iter().take(3).map(|s| s.to_string()).collect(),
            })
            .collect();
        // BTreeMap order already gives ascending ids; stable sort keeps it for ties.
        rows.sort_by_key(|r| std::cmp::Reverse(r.dataset_count));
        rows
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DatasetCoverage {
    pub id: String,
    pub name: String,
    pub origin: Vec<String>,
    pub category: Category,
    pub feature_count: usize,
    pub annotated_count: usize,
    pub coverage_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageStats {
    pub datasets: Vec<DatasetCoverage>,
    pub total_feature_count: usize,
    pub total_annotated_count: usize,
    /// A name used by several datasets counts once.
    pub distinct_feature_name_count: usize,
    pub distinct_annotated_name_count: usize,
    pub distinct_term_count: usize,
    /// Annotated feature rows over all feature rows.
    pub global_coverage_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermFrequency {
    pub term: TermId,
    pub dataset_count: usize,
    pub unique_name_count: usize,
    pub example_names: Vec<String>,
}
