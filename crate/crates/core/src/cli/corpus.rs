//! The shipped PCF corpus: TOML files embedded at compile time.

use super::CliError;
use crate::pcf::Pcf;
use crate::poly::{parse_poly, IntPoly};
use std::path::Path;

const BUILTIN: [(&str, &str); 8] = [
    ("apery", include_str!("../../data/apery.toml")),
    ("table1", include_str!("../../data/table1.toml")),
    ("table2", include_str!("../../data/table2.toml")),
    ("splitting", include_str!("../../data/splitting_examples.toml")),
    ("table3", include_str!("../../data/table3.toml")),
    ("table4", include_str!("../../data/table4.toml")),
    ("table5", include_str!("../../data/table5.toml")),
    ("ln2", include_str!("../../data/ln2_family.toml")),
];

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Universe {
    pub b_coeffs: (i64, i64),
    pub a_coeffs: (i64, i64),
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    #[serde(default)]
    pub group: Option<String>,
    #[serde(default)]
    pub a: Option<String>,
    pub b: String,
    /// expression for the limit over named constants
    #[serde(default)]
    pub limit: Option<String>,
    #[serde(default)]
    pub fr: Option<bool>,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub gcd: Option<String>,
    #[serde(default)]
    pub family: Option<String>,
    /// evaluate PCF[a(n+shift), b(n+shift)]
    #[serde(default)]
    pub shift: i64,
    #[serde(default)]
    pub note: Option<String>,
}

fn int_poly(field: &str, name: &str, s: &str) -> Result<IntPoly, CliError> {
    let p = parse_poly(s).map_err(|e| CliError::Corpus(format!("{name}.{field}: {e}")))?;
    p.to_int().ok_or_else(|| CliError::Corpus(format!("{name}.{field}: {s} has non-integer coefficients")))
}

impl CorpusEntry {
    pub fn b_poly(&self) -> Result<IntPoly, CliError> {
        Ok(int_poly("b", &self.name, &self.b)?.shift(self.shift))
    }

    pub fn a_poly(&self) -> Result<Option<IntPoly>, CliError> {
        self.a.as_deref().map(|a| Ok(int_poly("a", &self.name, a)?.shift(self.shift))).transpose()
    }

    /// The PCF with the shift applied, when the entry has an a.
    pub fn pcf(&self) -> Result<Option<Pcf>, CliError> {
        let Some(a) = self.a_poly()? else { return Ok(None) };
        Ok(Some(Pcf::new(a, self.b_poly()?).map_err(|e| CliError::Corpus(format!("{}: {e}", self.name)))?))
    }

    pub fn require_pcf(&self) -> Result<Pcf, CliError> {
        self.pcf()?.ok_or_else(|| CliError::Corpus(format!("{} lists only b", self.name)))
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CorpusFile {
    pub title: String,
    #[serde(default)]
    pub universe: Option<Universe>,
    #[serde(rename = "entry", default)]
    pub entries: Vec<CorpusEntry>,
}

impl CorpusFile {
    pub fn parse(text: &str) -> Result<CorpusFile, CliError> {
        toml::from_str(text).map_err(|e| CliError::Corpus(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<CorpusFile, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        CorpusFile::parse(&text)
    }

    pub fn entry(&self, name: &str) -> Option<&CorpusEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn group(&self, group: &str) -> Vec<&CorpusEntry> {
        self.entries.iter().filter(|e| e.group.as_deref() == Some(group)).collect()
    }
}

pub fn builtin_names() -> Vec<&'static str> {
    BUILTIN.iter().map(|(n, _)| *n).collect()
}

pub fn builtin(name: &str) -> Result<CorpusFile, CliError> {
    let (_, text) = BUILTIN
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| CliError::Usage(format!("unknown corpus file {name:?}; known: {}", builtin_names().join(", "))))?;
    CorpusFile::parse(text)
}

/// Every shipped file, in a fixed order.
pub fn all_builtin() -> Result<Vec<(&'static str, CorpusFile)>, CliError> {
    BUILTIN.iter().map(|(n, t)| Ok((*n, CorpusFile::parse(t)?))).collect()
}

/// Looks up `file:name` or a bare entry name across the shipped corpus.
pub fn find_entry(key: &str) -> Result<CorpusEntry, CliError> {
    if let Some((file, name)) = key.split_once(':') {
        let f = builtin(file)?;
        return f.entry(name).cloned().ok_or_else(|| CliError::Usage(format!("no entry {name:?} in {file}")));
    }
    for (_, f) in all_builtin()? {
        if let Some(e) = f.entry(key) {
            return Ok(e.clone());
        }
    }
    Err(CliError::Usage(format!("no corpus entry named {key:?}")))
}

/// Every PCF in the shipped corpus with its entry name.
pub fn all_pcfs() -> Result<Vec<(String, Pcf)>, CliError> {
    let mut out = Vec::new();
    for (_, f) in all_builtin()? {
        for e in &f.entries {
            if let Some(p) = e.pcf()? {
                out.push((e.name.clone(), p));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_file_parses_and_names_are_unique() {
        let mut names = std::collections::BTreeSet::new();
        for (_, f) in all_builtin().unwrap() {
            for e in &f.entries {
                assert!(names.insert(e.name.clone()), "duplicate {}", e.name);
                e.b_poly().unwrap();
                e.a_poly().unwrap();
            }
        }
        assert!(names.len() > 80);
    }

    #[test]
    fn shifted_entries() {
        let e = find_entry("table5:t5-factorial-1").unwrap();
        let p = e.require_pcf().unwrap();
        // 3n+1 at n−1
        assert_eq!(p.a, IntPoly::new([-2, 3]));
        assert_eq!(builtin("table3").unwrap().universe.unwrap().a_coeffs, (1, 5));
        assert!(find_entry("nope").is_err());
    }
}
