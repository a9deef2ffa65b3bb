//! Readers for ontology interchange files.
//!
//! Three line-oriented formats are supported:
//!
//! * edge list: `child<TAB>parent`, `#` comments, blank lines ignored;
//! * labels: `id<TAB>label[<TAB>synonym]*`;
//! * a small OBO subset: `[Term]` stanzas with `id:`, `name:`,
//!   `synonym: "..."`, `is_a:`, `relationship:` and `is_obsolete:` lines.
//!
//! All readers accept LF and CRLF line endings and trim surrounding
//! whitespace from fields.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{BufRead, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ontology::{OntologyGraph, TermId, TermSpec};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ParseReport {
    pub term_count: usize,
    pub edge_count: usize,
    pub ignored_relation_count: usize,
    pub warnings: Vec<(usize, String)>,
}

/// Output of an ontology parser, ready for [`OntologyGraph::build`].
#[derive(Clone, Debug, Default)]
pub struct ParsedOntology {
    pub terms: Vec<TermSpec>,
    pub edges: Vec<(TermId, TermId)>,
    pub report: ParseReport,
}

impl ParsedOntology {
    fn finish(mut self) -> Self {
        self.report.term_count = self.terms.len();
        self.report.edge_count = self.edges.len();
        self
    }

    /// Attaches labels/synonyms; entries for ids not in the ontology become
    /// warnings (line 0).
    pub fn apply_labels(&mut self, labels: &LabelMap) {
        let mut pos: HashMap<&str, usize> = HashMap::new();
        for (i, t) in self.terms.iter().enumerate() {
            pos.insert(t.id.as_str(), i);
        }
        let mut unknown = Vec::new();
        let mut updates = Vec::new();
        for (id, entry) in labels {
            match pos.get(id.as_str()) {
                Some(&i) => updates.push((i, entry)),
                None => unknown.push(id.clone()),
            }
        }
        for (i, entry) in updates {
            self.terms[i].label = Some(entry.label.clone());
            self.terms[i].synonyms = entry.synonyms.clone();
        }
        for id in unknown {
            self.report
                .warnings
                .push((0, format!("label for unknown term {id} ignored")));
        }
    }

    pub fn build(self) -> Result<OntologyGraph> {
        OntologyGraph::build(self.terms, self.edges)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelEntry {
    pub label: String,
    pub synonyms: Vec<String>,
}

pub type LabelMap = BTreeMap<TermId, LabelEntry>;

fn lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)).map_err(Error::from))
}

fn skip(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

fn term_field(raw: &str, line: usize, what: &str) -> Result<TermId> {
    TermId::new(raw.trim()).map_err(|_| Error::MalformedLine {
        line,
        message: format!("empty {what}"),
    })
}

pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<ParsedOntology> {
    let mut out = ParsedOntology::default();
    let mut seen: HashSet<TermId> = HashSet::new();
    let mut records = 0usize;
    for item in lines(reader) {
        let (no, line) = item?;
        if skip(&line) {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(Error::MalformedLine {
                line: no,
                message: format!("expected 2 tab-separated fields, found {}", fields.len()),
            });
        }
        let child = term_field(fields[0], no, "child id")?;
        let parent = term_field(fields[1], no, "parent id")?;
        for t in [&child, &parent] {
            if seen.insert(t.clone()) {
                out.terms.push(TermSpec::bare(t.clone()));
            }
        }
        out.edges.push((child, parent));
        records += 1;
    }
    if records == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(out.finish())
}

pub fn write_edge_list<'a, W, I>(mut out: W, edges: I) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = (&'a TermId, &'a TermId)>,
{
    for (c, p) in edges {
        writeln!(out, "{c}\t{p}")?;
    }
    Ok(())
}

/// Reads a labels file. Later duplicates override earlier ones and produce
/// a warning.
pub fn parse_labels<R: BufRead>(reader: R) -> Result<(LabelMap, Vec<(usize, String)>)> {
    let mut map = LabelMap::new();
    let mut warnings = Vec::new();
    for item in lines(reader) {
        let (no, line) = item?;
        if skip(&line) {
            continue;
        }
        let mut fields = line.split('\t').map(str::trim);
        let id = term_field(fields.next().unwrap_or(""), no, "term id")?;
        let label = match fields.next() {
            Some(l) if !l.is_empty() => l.to_owned(),
            _ => {
                return Err(Error::MalformedLine {
                    line: no,
                    message: "missing label".into(),
                })
            }
        };
        let synonyms = fields
            .filter(|s| !s.is_empty())
            .map(str::to_owned)
            .collect();
        if map
            .insert(id.clone(), LabelEntry { label, synonyms })
            .is_some()
        {
            warnings.push((
                no,
                format!("duplicate labels for {id}; keeping the later entry"),
            ));
        }
    }
    Ok((map, warnings))
}

struct Stanza {
    start: usize,
    id: Option<TermId>,
    name: Option<String>,
    synonyms: Vec<String>,
    parents: Vec<(usize, TermId)>,
    relations: usize,
    obsolete: bool,
}

impl Stanza {
    fn new(start: usize) -> Self {
        Stanza {
            start,
            id: None,
            name: None,
            synonyms: Vec::new(),
            parents: Vec::new(),
            relations: 0,
            obsolete: false,
        }
    }
}

/// Strips a trailing `! comment` and OBO qualifier block.
fn obo_value(raw: &str) -> &str {
    let v = raw.split(" !").next().unwrap_or(raw);
    let v = v.split('{').next().unwrap_or(v);
    v.trim()
}

fn quoted(raw: &str) -> Option<&str> {
    let start = raw.find('"')? + 1;
    let len = raw[start..].find('"')?;
    Some(&raw[start..start + len])
}

/// Parses `[Term]` stanzas. Other stanza types and header lines are ignored.
pub fn parse_obo_subset<R: BufRead>(reader: R) -> Result<ParsedOntology> {
    let mut stanzas: Vec<Stanza> = Vec::new();
    let mut current: Option<Stanza> = None;
    let mut in_term = false;

    for item in lines(reader) {
        let (no, line) = item?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('!') {
            continue;
        }
        if line.starts_with('[') {
            stanzas.extend(current.take());
            in_term = line == "[Term]";
            if in_term {
                current = Some(Stanza::new(no));
            }
            continue;
        }
        let Some(stanza) = current.as_mut().filter(|_| in_term) else {
            continue;
        };
        let Some((key, value)) = line.split_once(':') else {
            return Err(Error::MalformedLine {
                line: no,
                message: "expected `key: value`".into(),
            });
        };
        let value = value.trim();
        match key.trim() {
            "id" => stanza.id = Some(term_field(value, no, "id")?),
            "name" => stanza.name = Some(value.to_owned()),
            "synonym" => match quoted(value) {
                Some(s) => stanza.synonyms.push(s.to_owned()),
                None => {
                    return Err(Error::MalformedLine {
                        line: no,
                        message: "synonym without quoted text".into(),
                    })
                }
            },
            "is_a" => stanza
                .parents
                .push((no, term_field(obo_value(value), no, "is_a target")?)),
            "relationship" => stanza.relations += 1,
            "is_obsolete" => stanza.obsolete = value.eq_ignore_ascii_case("true"),
            _ => {}
        }
    }
    stanzas.extend(current);

    let mut out = ParsedOntology::default();
    let mut obsolete: HashSet<TermId> = HashSet::new();
    let mut live = Vec::new();
    for s in stanzas {
        let Some(id) = s.id.clone() else {
            return Err(Error::MalformedStanza { line: s.start });
        };
        if s.obsolete {
            out.report
                .warnings
                .push((s.start, format!("obsolete term {id} skipped")));
            obsolete.insert(id);
            continue;
        }
        live.push((id, s));
    }

    let mut declared: HashSet<TermId> = live.iter().map(|(id, _)| id.clone()).collect();
    let mut implicit = Vec::new();
    for (id, s) in live {
        out.report.ignored_relation_count += s.relations;
        out.terms.push(TermSpec {
            id: id.clone(),
            label: s.name,
            synonyms: s.synonyms,
        });
        for (no, parent) in s.parents {
            if obsolete.contains(&parent) {
                out.report
                    .warnings
                    .push((no, format!("is_a {id} -> obsolete {parent} dropped")));
                continue;
            }
            if declared.insert(parent.clone()) {
                out.report.warnings.push((
                    no,
                    format!("parent {parent} has no stanza; added as bare term"),
                ));
                implicit.push(TermSpec::bare(parent.clone()));
            }
            out.edges.push((id.clone(), parent));
        }
    }
    out.terms.extend(implicit);
    if out.terms.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(out.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(p: &ParsedOntology) -> Vec<&str> {
        p.terms.iter().map(|t| t.id.as_str()).collect()
    }

    #[test]
    fn two_line_edge_list() {
        let p = parse_edge_list("b\ta\na\tr\n".as_bytes()).unwrap();
        assert_eq!(ids(&p), ["b", "a", "r"]);
        assert_eq!(p.report.term_count, 3);
        assert_eq!(p.report.edge_count, 2);
    }

    #[test]
    fn three_fields_is_malformed() {
        let err = parse_edge_list("b a r\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::MalformedLine { line: 1, .. }));
        let err = parse_edge_list("b\ta\tr\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::MalformedLine { line: 1, .. }));
    }

    #[test]
    fn comments_and_blanks_skipped() {
        let p = parse_edge_list("# comment\n\nb\ta\n".as_bytes()).unwrap();
        assert_eq!(p.report.term_count, 2);
        assert_eq!(p.report.edge_count, 1);
        assert!(p.report.warnings.is_empty());
    }

    #[test]
    fn empty_edge_list() {
        assert!(matches!(
            parse_edge_list("".as_bytes()),
            Err(Error::EmptyInput)
        ));
        assert!(matches!(
            parse_edge_list("# x\n\n".as_bytes()),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn crlf_and_padding() {
        let p = parse_edge_list(" b \t a\r\na\tr\r\n".as_bytes()).unwrap();
        assert_eq!(ids(&p), ["b", "a", "r"]);
        assert!(matches!(
            parse_edge_list("\ta\n".as_bytes()),
            Err(Error::MalformedLine { line: 1, .. })
        ));
    }

    #[test]
    fn labels_with_synonyms() {
        let (map, warnings) =
            parse_labels("397669002\tAge\tPatient age quantile\tage\n".as_bytes()).unwrap();
        assert!(warnings.is_empty());
        let entry = &map[&TermId::new("397669002").unwrap()];
        assert_eq!(entry.label, "Age");
        assert_eq!(entry.synonyms, ["Patient age quantile", "age"]);
    }

    #[test]
    fn empty_label_is_malformed() {
        assert!(matches!(
            parse_labels("x\t\n".as_bytes()),
            Err(Error::MalformedLine { line: 1, .. })
        ));
        assert!(matches!(
            parse_labels("ok\tfine\nx\n".as_bytes()),
            Err(Error::MalformedLine { line: 2, .. })
        ));
    }

    #[test]
    fn duplicate_label_last_wins() {
        let (map, warnings) = parse_labels("x\tfirst\nx\tsecond\tsyn\n".as_bytes()).unwrap();
        assert_eq!(map.len(), 1);
        assert_eq!(map[&TermId::new("x").unwrap()].label, "second");
        assert_eq!(warnings.len(), 1);
        assert_eq!(warnings[0].0, 2);
    }

    #[test]
    fn apply_labels_warns_on_unknown() {
        let mut p = parse_edge_list("b\ta\n".as_bytes()).unwrap();
        let (map, _) = parse_labels("a\tAlpha\nzz\tNothing\n".as_bytes()).unwrap();
        p.apply_labels(&map);
        assert_eq!(p.terms[1].label.as_deref(), Some("Alpha"));
        assert_eq!(p.report.warnings.len(), 1);
    }

    const OBO: &str = "format-version: 1.2\n\
        ontology: demo\n\
        \n\
        [Term]\n\
        id: X:1\n\
        name: root\n\
        \n\
        [Term]\n\
        id: X:2\n\
        name: child term\n\
        synonym: \"kid\" EXACT [src:1]\n\
        is_a: X:1 ! root\n\
        relationship: part_of X:1\n\
        \n\
        [Typedef]\n\
        id: part_of\n\
        name: part of\n";

    #[test]
    fn obo_stanzas() {
        let p = parse_obo_subset(OBO.as_bytes()).unwrap();
        assert_eq!(ids(&p), ["X:1", "X:2"]);
        assert_eq!(p.terms[1].label.as_deref(), Some("child term"));
        assert_eq!(p.terms[1].synonyms, ["kid"]);
        assert_eq!(p.edges.len(), 1);
        assert_eq!(p.edges[0].1.as_str(), "X:1");
        assert_eq!(p.report.ignored_relation_count, 1);
        assert!(p.report.warnings.is_empty());
    }

    #[test]
    fn obo_single_term_single_isa() {
        let p = parse_obo_subset("[Term]\nid: A\nname: a\nis_a: B\n".as_bytes()).unwrap();
        // B has no stanza and is added as an implicit term.
        assert_eq!(p.edges.len(), 1);
        assert_eq!(ids(&p), ["A", "B"]);
        assert_eq!(p.report.warnings.len(), 1);
    }

    #[test]
    fn obo_missing_id() {
        let err = parse_obo_subset("[Term]\nname: anonymous\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::MalformedStanza { line: 1 }));
    }

    #[test]
    fn obo_obsolete_skipped() {
        let text = "[Term]\nid: A\n\n[Term]\nid: B\nis_obsolete: true\n\n[Term]\nid: C\nis_a: B\nis_a: A\n";
        let p = parse_obo_subset(text.as_bytes()).unwrap();
        assert_eq!(ids(&p), ["A", "C"]);
        assert_eq!(p.edges.len(), 1);
        assert_eq!(p.report.warnings.len(), 2);
    }

    #[test]
    fn obo_malformed_lines() {
        assert!(matches!(
            parse_obo_subset("[Term]\nid: A\nnot a pair\n".as_bytes()),
            Err(Error::MalformedLine { line: 3, .. })
        ));
        assert!(matches!(
            parse_obo_subset("[Term]\nid: A\nsynonym: bare text\n".as_bytes()),
            Err(Error::MalformedLine { line: 3, .. })
        ));
    }

    #[test]
    fn obo_synonym_takes_first_quotes_only() {
        let p = parse_obo_subset("[Term]\nid: A\nsynonym: \"one\" RELATED \"two\" []\n".as_bytes())
            .unwrap();
        assert_eq!(p.terms[0].synonyms, ["one"]);
    }
}
