use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use serde_json::{json, Value};

use semfeat_core::ingest::{
    parse_edge_list, parse_labels, parse_obo_subset, LabelMap, ParseReport,
};
use semfeat_core::{
    AnnotationCatalog, DossEngine, Error, LabelIndex, OntologyGraph, RatioModel, SimilarityParams,
    TermId,
};

use crate::failure::Failure;
use crate::{Cli, Command, Format, GlobalOpts};

const DEFAULT_SEARCH_HITS: usize = 10;

pub fn dispatch(cli: &Cli) -> Result<(), Failure> {
    let opts = &cli.opts;
    let mut out = Vec::new();
    match &cli.command {
        Command::Validate => validate(opts, &mut out)?,
        Command::TermSim { t1, t2 } => term_sim(opts, t1, t2, &mut out)?,
        Command::Matrix => matrix(opts, &mut out)?,
        Command::Doss { d1, d2 } => doss(opts, d1, d2, &mut out)?,
        Command::DossMatrix => doss_matrix(opts, &mut out)?,
        Command::Stats => stats(opts, &mut out)?,
        Command::Terms => terms(opts, &mut out)?,
        Command::Search { query } => search(opts, query, &mut out)?,
    }
    emit(opts, &out)
}

/// Writes the finished artifact in one go, so a failing command never leaves
/// a partial file behind.
fn emit(opts: &GlobalOpts, bytes: &[u8]) -> Result<(), Failure> {
    match &opts.out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| Failure::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|()| stdout.flush())
                .map_err(|e| Failure::io(Path::new("<stdout>"), e))
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::io(path, e))
}

fn warn(path: &Path, warnings: &[(usize, String)]) {
    for (line, message) in warnings {
        if *line == 0 {
            eprintln!("warning: {}: {message}", path.display());
        } else {
            eprintln!("warning: {}:{line}: {message}", path.display());
        }
    }
}

fn load_labels(path: &Path) -> Result<LabelMap, Failure> {
    let (labels, warnings) =
        parse_labels(open(path)?).map_err(|e| Failure::from(e).in_file(path))?;
    warn(path, &warnings);
    Ok(labels)
}

fn has_ontology(opts: &GlobalOpts) -> bool {
    opts.ontology_edges.is_some() || opts.ontology_obo.is_some()
}

fn load_ontology(opts: &GlobalOpts) -> Result<(OntologyGraph, ParseReport), Failure> {
    let (path, parsed) = match (&opts.ontology_edges, &opts.ontology_obo) {
        (Some(path), None) => (path, parse_edge_list(open(path)?)),
        (None, Some(path)) => (path, parse_obo_subset(open(path)?)),
        (Some(_), Some(_)) => {
            return Err(Failure::usage(
                "give only one of --ontology-edges and --ontology-obo",
            ))
        }
        (None, None) => {
            return Err(Failure::usage(
                "an ontology is required (--ontology-edges or --ontology-obo)",
            ))
        }
    };
    let mut parsed = parsed.map_err(|e| Failure::from(e).in_file(path))?;
    if let Some(labels) = &opts.labels {
        parsed.apply_labels(&load_labels(labels)?);
    }
    warn(path, &parsed.report.warnings);
    let report = parsed.report.clone();
    let graph = parsed.build().map_err(|e| Failure::from(e).in_file(path))?;
    Ok((graph, report))
}

fn load_catalog(opts: &GlobalOpts) -> Result<AnnotationCatalog, Failure> {
    let path = opts
        .catalog
        .as_ref()
        .ok_or_else(|| Failure::usage("a catalog is required (--catalog)"))?;
    AnnotationCatalog::from_reader(open(path)?).map_err(|e| Failure::from(e).in_file(path))
}

fn optional_catalog(opts: &GlobalOpts) -> Result<Option<AnnotationCatalog>, Failure> {
    match &opts.catalog {
        Some(_) => load_catalog(opts).map(Some),
        None => Ok(None),
    }
}

fn ontology_version(opts: &GlobalOpts, catalog: Option<&AnnotationCatalog>) -> String {
    opts.ontology_version
        .clone()
        .or_else(|| catalog.map(|c| c.ontology_version().to_string()))
        .unwrap_or_else(|| "unspecified".into())
}

fn params(opts: &GlobalOpts) -> Result<SimilarityParams, Failure> {
    Ok(SimilarityParams::new(
        opts.alpha,
        opts.beta,
        opts.symmetrize.into(),
    )?)
}

fn top(opts: &GlobalOpts) -> Result<Option<usize>, Failure> {
    match opts.top {
        Some(0) => Err(Failure::usage("--top must be at least 1")),
        k => Ok(k),
    }
}

fn f6(v: f64) -> String {
    format!("{v:.6}")
}

fn model_metadata(version: String, p: &SimilarityParams) -> Vec<(&'static str, String)> {
    vec![
        ("ontology_version", version),
        ("alpha", p.alpha().to_string()),
        ("beta", p.beta().to_string()),
        ("symmetrization", p.symmetrization().to_string()),
    ]
}

fn write_comments(out: &mut Vec<u8>, metadata: &[(&str, String)]) {
    for (key, value) in metadata {
        out.extend_from_slice(format!("# {key}: {value}\n").as_bytes());
    }
}

fn csv_rows<I, R>(out: &mut Vec<u8>, header: &[&str], rows: I) -> Result<(), Failure>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(Error::from)?;
    for row in rows {
        w.write_record(row).map_err(Error::from)?;
    }
    w.flush().map_err(Error::from)?;
    Ok(())
}

fn write_json(out: &mut Vec<u8>, value: &Value) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(Error::from)?;
    out.push(b'\n');
    Ok(())
}

fn with_fields(value: Value, fields: &[(&str, Value)]) -> Value {
    let mut map = match value {
        Value::Object(map) => map,
        other => {
            let mut map = serde_json::Map::new();
            map.insert("value".into(), other);
            map
        }
    };
    for (key, v) in fields {
        map.insert((*key).into(), v.clone());
    }
    Value::Object(map)
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<Value, Failure> {
    Ok(serde_json::to_value(value).map_err(Error::from)?)
}

fn validate(opts: &GlobalOpts, out: &mut Vec<u8>) -> Result<(), Failure> {
    let (graph, report) = load_ontology(opts)?;
    let catalog = optional_catalog(opts)?;
    if let Some(catalog) = &catalog {
        let missing: Vec<TermId> = catalog
            .annotated_terms()
            .into_iter()
            .filter(|t| !graph.contains(t))
            .collect();
        if !missing.is_empty() {
            return Err(Error::UnknownTerms(missing).into());
        }
    }
    let version = ontology_version(opts, catalog.as_ref());
    let roots = graph.roots().len();
    match opts.format {
        Format::Csv => {
            let text = format!(
                "{} terms, {} edges\n{roots} roots, {} ignored relations, {} warnings\nontology_version: {version}\n",
                graph.term_count(),
                graph.edge_count(),
                report.ignored_relation_count,
                report.warnings.len(),
            );
            out.extend_from_slice(text.as_bytes());
        }
        Format::Json => {
            let warnings: Vec<Value> = report
                .warnings
                .iter()
                .map(|(line, message)| json!({ "line": line, "message": message }))
                .collect();
            write_json(
                out,
                &json!({
                    "ontology_version": version,
                    "term_count": graph.term_count(),
                    "edge_count": graph.edge_count(),
                    "root_count": roots,
                    "ignored_relation_count": report.ignored_relation_count,
                    "warnings": warnings,
                }),
            )?;
        }
    }
    Ok(())
}

fn term_sim(opts: &GlobalOpts, t1: &str, t2: &str, out: &mut Vec<u8>) -> Result<(), Failure> {
    let (graph, _) = load_ontology(opts)?;
    let missing: Vec<TermId> = [t1, t2]
        .into_iter()
        .filter(|t| !graph.contains(t))
        .map(TermId::new)
        .collect::<Result<_, _>>()?;
    if !missing.is_empty() {
        return Err(Error::UnknownTerms(missing).into());
    }
    let p = params(opts)?;
    let model = RatioModel::new(&graph, p);
    let b = model.breakdown(t1, t2)?;
    let sim = model.similarity(t1, t2)?;
    let version = ontology_version(opts, optional_catalog(opts)?.as_ref());
    match opts.format {
        Format::Csv => {
            write_comments(out, &model_metadata(version, &p));
            let rows = [
                ("t1".to_string(), t1.to_string()),
                ("t2".into(), t2.to_string()),
                ("theta1".into(), b.theta1.to_string()),
                ("theta2".into(), b.theta2.to_string()),
                ("psi".into(), b.psi.to_string()),
                (format!("sim({t1}->{t2})"), f6(b.forward)),
                (format!("sim({t2}->{t1})"), f6(b.backward)),
                ("mean".into(), f6(b.mean)),
                ("similarity".into(), f6(sim)),
                ("distance".into(), f6(1.0 - sim)),
            ];
            csv_rows(out, &["field", "value"], rows.iter().map(|(k, v)| [k, v]))?;
        }
        Format::Json => write_json(
            out,
            &json!({
                "ontology_version": version,
                "alpha": p.alpha(),
                "beta": p.beta(),
                "symmetrization": p.symmetrization(),
                "t1": t1,
                "t2": t2,
                "theta1": b.theta1,
                "theta2": b.theta2,
                "psi": b.psi,
                "forward": b.forward,
                "backward": b.backward,
                "mean": b.mean,
                "similarity": sim,
                "distance": 1.0 - sim,
            }),
        )?,
    }
    Ok(())
}

fn matrix(opts: &GlobalOpts, out: &mut Vec<u8>) -> Result<(), Failure> {
    let (graph, _) = load_ontology(opts)?;
    let catalog = load_catalog(opts)?;
    let p = params(opts)?;
    let terms = catalog.annotated_terms();
    let mut m = RatioModel::new(&graph, p).pairwise_matrix(&terms)?;
    let kind = if opts.distance {
        m = m.to_distance();
        "distance"
    } else {
        "similarity"
    };
    let version = ontology_version(opts, Some(&catalog));
    match opts.format {
        Format::Csv => {
            let mut metadata = model_metadata(version, &p);
            metadata.push(("kind", kind.into()));
            m.write_csv(&mut *out, &metadata)?;
        }
        Format::Json => {
            let value = with_fields(
                to_json(&m)?,
                &[
                    ("ontology_version", json!(version)),
                    ("alpha", json!(p.alpha())),
                    ("beta", json!(p.beta())),
                    ("symmetrization", json!(p.symmetrization())),
                    ("kind", json!(kind)),
                ],
            );
            write_json(out, &value)?;
        }
    }
    Ok(())
}

fn doss(opts: &GlobalOpts, d1: &str, d2: &str, out: &mut Vec<u8>) -> Result<(), Failure> {
    let (graph, _) = load_ontology(opts)?;
    let catalog = load_catalog(opts)?;
    let p = params(opts)?;
    let engine = DossEngine::new(RatioModel::new(&graph, p), &catalog);
    let result = engine.doss(d1, d2, opts.agg.into())?;
    let version = ontology_version(opts, Some(&catalog));
    match opts.format {
        Format::Csv => {
            let mut metadata = model_metadata(version, &p);
            metadata.push(("aggregator", result.aggregator.to_string()));
            write_comments(out, &metadata);
            let value = f6(result.value);
            if opts.verbose {
                let header = [
                    "source",
                    "reference",
                    "doss",
                    "source_term",
                    "reference_term",
                    "similarity",
                ];
                let rows = result.best_matches.iter().map(|m| {
                    [
                        result.source.clone(),
                        result.reference.clone(),
                        value.clone(),
                        m.source_term.to_string(),
                        m.reference_term.to_string(),
                        f6(m.similarity),
                    ]
                });
                csv_rows(out, &header, rows)?;
            } else {
                let row = [result.source.clone(), result.reference.clone(), value];
                csv_rows(out, &["source", "reference", "doss"], [row])?;
            }
        }
        Format::Json => {
            let mut value = to_json(&result)?;
            if !opts.verbose {
                if let Value::Object(map) = &mut value {
                    map.remove("best_matches");
                }
            }
            let value = with_fields(
                value,
                &[
                    ("ontology_version", json!(version)),
                    ("alpha", json!(p.alpha())),
                    ("beta", json!(p.beta())),
                ],
            );
            write_json(out, &value)?;
        }
    }
    Ok(())
}

fn doss_matrix(opts: &GlobalOpts, out: &mut Vec<u8>) -> Result<(), Failure> {
    let (graph, _) = load_ontology(opts)?;
    let catalog = load_catalog(opts)?;
    let p = params(opts)?;
    let engine = DossEngine::new(RatioModel::new(&graph, p), &catalog);
    let m = engine.matrix(opts.agg.into())?;
    for ex in &m.excluded {
        eprintln!("warning: dataset {} excluded: {}", ex.id, ex.reason);
    }
    let version = ontology_version(opts, Some(&catalog));
    match opts.format {
        Format::Csv => {
            let mut metadata = model_metadata(version, &p);
            metadata.push(("aggregator", m.aggregator.to_string()));
            for ex in &m.excluded {
                metadata.push(("excluded", format!("{} ({})", ex.id, ex.reason)));
            }
            m.write_csv(&mut *out, &metadata)?;
        }
        Format::Json => {
            let value = with_fields(
                to_json(&m)?,
                &[
                    ("ontology_version", json!(version)),
                    ("alpha", json!(p.alpha())),
                    ("beta", json!(p.beta())),
                ],
            );
            write_json(out, &value)?;
        }
    }
    Ok(())
}

fn stats(opts: &GlobalOpts, out: &mut Vec<u8>) -> Result<(), Failure> {
    let catalog = load_catalog(opts)?;
    let s = catalog.coverage_stats();
    let version = ontology_version(opts, Some(&catalog));
    match opts.format {
        Format::Csv => {
            write_comments(
                out,
                &[
                    ("ontology_version", version),
                    ("datasets", s.datasets.len().to_string()),
                    ("total_features", s.total_feature_count.to_string()),
                    ("total_annotated", s.total_annotated_count.to_string()),
                    (
                        "distinct_feature_names",
                        s.distinct_feature_name_count.to_string(),
                    ),
                    (
                        "distinct_annotated_names",
                        s.distinct_annotated_name_count.to_string(),
                    ),
                    ("distinct_terms", s.distinct_term_count.to_string()),
                    ("global_coverage", f6(s.global_coverage_fraction)),
                ],
            );
            let header = [
                "id", "name", "origin", "category", "no_feat", "no_ann", "coverage",
            ];
            let rows = s.datasets.iter().map(|d| {
                [
                    d.id.clone(),
                    d.name.clone(),
                    d.origin.join("; "),
                    d.category.to_string(),
                    d.feature_count.to_string(),
                    d.annotated_count.to_string(),
                    f6(d.coverage_fraction),
                ]
            });
            csv_rows(out, &header, rows)?;
        }
        Format::Json => {
            let value = with_fields(to_json(&s)?, &[("ontology_version", json!(version))]);
            write_json(out, &value)?;
        }
    }
    Ok(())
}

/// Label lookup for reports: the ontology's labels when one is given, else
/// a bare label file, else nothing.
enum Labels {
    Graph(Box<OntologyGraph>),
    Map(LabelMap),
    None,
}

impl Labels {
    fn load(opts: &GlobalOpts) -> Result<Self, Failure> {
        if has_ontology(opts) {
            Ok(Labels::Graph(Box::new(load_ontology(opts)?.0)))
        } else if let Some(path) = &opts.labels {
            Ok(Labels::Map(load_labels(path)?))
        } else {
            Ok(Labels::None)
        }
    }

    fn get(&self, id: &str) -> Option<&str> {
        match self {
            Labels::Graph(g) => g.label(id),
            Labels::Map(m) => m.get(id).map(|e| e.label.as_str()),
            Labels::None => None,
        }
    }
}

fn terms(opts: &GlobalOpts, out: &mut Vec<u8>) -> Result<(), Failure> {
    let catalog = load_catalog(opts)?;
    let labels = Labels::load(opts)?;
    let mut report = catalog.term_frequency_report();
    if let Some(k) = top(opts)? {
        report.truncate(k);
    }
    let version = ontology_version(opts, Some(&catalog));
    match opts.format {
        Format::Csv => {
            write_comments(out, &[("ontology_version", version)]);
            let header = [
                "term",
                "label",
                "no_datasets",
                "no_unique_names",
                "example_names",
            ];
            let rows = report.iter().map(|r| {
                [
                    r.term.to_string(),
                    labels.get(&r.term).unwrap_or_default().to_string(),
                    r.dataset_count.to_string(),
                    r.unique_name_count.to_string(),
                    r.example_names.join("; "),
                ]
            });
            csv_rows(out, &header, rows)?;
        }
        Format::Json => {
            let rows: Vec<Value> = report
                .iter()
                .map(|r| {
                    with_fields(
                        serde_json::to_value(r).unwrap_or(Value::Null),
                        &[("label", json!(labels.get(&r.term)))],
                    )
                })
                .collect();
            write_json(out, &json!({ "ontology_version": version, "terms": rows }))?;
        }
    }
    Ok(())
}

fn search(opts: &GlobalOpts, query: &str, out: &mut Vec<u8>) -> Result<(), Failure> {
    let k = top(opts)?.unwrap_or(DEFAULT_SEARCH_HITS);
    let index = match Labels::load(opts)? {
        Labels::Graph(g) => LabelIndex::from_graph(&g),
        Labels::Map(m) => LabelIndex::from_labels(&m),
        Labels::None => {
            return Err(Failure::usage(
                "search needs labels (--labels, --ontology-obo or --ontology-edges)",
            ))
        }
    };
    let hits = index.search(query, k);
    let version = ontology_version(opts, optional_catalog(opts)?.as_ref());
    match opts.format {
        Format::Csv => {
            write_comments(out, &[("ontology_version", version)]);
            let rows = hits.iter().map(|h| {
                [
                    h.term.to_string(),
                    h.label.clone(),
                    h.matched.clone(),
                    f6(h.score),
                ]
            });
            csv_rows(out, &["term", "label", "matched", "score"], rows)?;
        }
        Format::Json => write_json(
            out,
            &json!({ "ontology_version": version, "query": query, "matches": to_json(&hits)? }),
        )?,
    }
    Ok(())
}
