//! Text, JSON and CSV encodings of presentations and count reports.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{CountReport, Family, Presentation, PresentationError, RelatorLabel};
use crate::words::{Gen, Word};

impl fmt::Display for Presentation {
    /// GAP-style `< g2,g3 | g2^2, g3^2 >`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens().into_iter().map(|g| self.alphabet().format_gen(g)).collect();
        let rels: Vec<String> = self.relators().iter().map(|r| self.alphabet().format_word(r)).collect();
        write!(f, "< {} | {} >", gens.join(","), rels.join(", "))
    }
}

impl FromStr for Presentation {
    type Err = PresentationError;

    /// Parses the GAP-style text. The alphabet is recognised from the
    /// generator list: `g1..gk`, `g2..gn`, or a full set of `x[p,q]`.
    /// Labels are lost in this format and come back as `given`.
    fn from_str(s: &str) -> Result<Presentation, PresentationError> {
        let bad = |m: &str| PresentationError::Parse(m.to_string());
        let body = s
            .trim()
            .strip_prefix('<')
            .and_then(|t| t.strip_suffix('>'))
            .ok_or_else(|| bad("expected < gens | relators >"))?;
        let (gens_txt, rels_txt) = body.split_once('|').ok_or_else(|| bad("missing '|'"))?;
        let gens: Vec<Gen> = split_top_level(gens_txt)
            .into_iter()
            .map(|t| {
                let w: Word = t.parse()?;
                match w.letters() {
                    [l] if !l.inverse => Ok(l.gen),
                    _ => Err(bad("generator list entries must be single letters")),
                }
            })
            .collect::<Result<_, PresentationError>>()?;
        let interval_style = gens_txt.contains('[');
        let family = recognise(&gens, interval_style).ok_or_else(|| bad("unrecognised generator list"))?;
        let relators: Vec<Word> = split_top_level(rels_txt)
            .into_iter()
            .map(|t| t.parse::<Word>().map_err(PresentationError::from))
            .collect::<Result<_, _>>()?;
        let labels = vec![RelatorLabel::Given; relators.len()];
        Presentation::from_parts(family, relators, labels)
    }
}

fn recognise(gens: &[Gen], interval_style: bool) -> Option<Family> {
    let k = gens.len() as u32;
    let idx: Vec<u32> = gens.iter().map(|g| g.0).collect();
    if interval_style {
        let n = (2..64).find(|n| n * (n - 1) / 2 == k)?;
        return (idx == (1..=k).collect::<Vec<_>>()).then_some(Family::Standard(n));
    }
    if idx == (1..=k).collect::<Vec<_>>() {
        Some(Family::Custom(k))
    } else if idx == (2..=k + 1).collect::<Vec<_>>() {
        Some(Family::Minimal(k + 1))
    } else {
        None
    }
}

/// Splits on commas that are not inside `x[p,q]` brackets.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = s[start..].trim();
    if !last.is_empty() || !out.is_empty() {
        out.push(last);
    }
    out.retain(|t| !t.is_empty());
    out
}

/// `{ngens, relators: [[[gen, sign], ...], ...], labels, family}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub ngens: usize,
    pub relators: Vec<Vec<(u32, i32)>>,
    pub labels: Vec<RelatorLabel>,
    pub family: String,
}

impl From<&Presentation> for PresentationJson {
    fn from(p: &Presentation) -> PresentationJson {
        PresentationJson {
            ngens: p.ngens(),
            relators: p
                .relators()
                .iter()
                .map(|r| r.letters().iter().map(|l| (l.gen.0, l.sign())).collect())
                .collect(),
            labels: p.labels().to_vec(),
            family: p.family().to_string(),
        }
    }
}

impl TryFrom<PresentationJson> for Presentation {
    type Error = PresentationError;

    fn try_from(j: PresentationJson) -> Result<Presentation, PresentationError> {
        let family: Family = j.family.parse()?;
        if family.alphabet().ngens() != j.ngens {
            return Err(PresentationError::Parse(format!("ngens {} does not match family {}", j.ngens, j.family)));
        }
        if j.labels.len() != j.relators.len() {
            return Err(PresentationError::Parse("labels and relators differ in length".into()));
        }
        let relators = j.relators.into_iter().map(Word::from_signed).collect();
        Presentation::from_parts(family, relators, j.labels)
    }
}

impl Presentation {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PresentationJson::from(self)).expect("presentation serialises")
    }

    pub fn from_json(s: &str) -> Result<Presentation, PresentationError> {
        let j: PresentationJson = serde_json::from_str(s).map_err(|e| PresentationError::Parse(e.to_string()))?;
        j.try_into()
    }
}

/// CSV with one row per report.
pub fn count_reports_csv(reports: &[CountReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8")
}
