//! The line-oriented model file format.
//!
//! ```text
//! model cp2
//! generator x1 degree 1
//! generator x2 degree 3
//! d x2 = 1/2*[x1,x1]
//! map i : cp1 -> cp2
//! i x1 = x1
//! ```
//!
//! `generator` and `d` lines belong to the latest `model` line. A `#` at the
//! start of a line or after whitespace starts a comment.

use std::fmt;
use std::sync::Arc;

use gla_free::{verify_morphism, FreeGradedLie, GeneratorSet, LieElement, LieMorphism};

use crate::error::CliError;
use crate::expr::{parse_expr, Expr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSpec {
    pub name: String,
    pub generators: Vec<(String, i64)>,
    /// Generators without an entry are cycles.
    pub differentials: Vec<(String, Expr)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismSpec {
    pub name: String,
    pub source: String,
    pub target: String,
    /// Source generators without an entry go to zero.
    pub images: Vec<(String, Expr)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelFile {
    pub models: Vec<ModelSpec>,
    pub maps: Vec<MorphismSpec>,
}

const KEYWORDS: [&str; 4] = ["model", "generator", "d", "map"];

impl ModelSpec {
    pub fn new(name: &str) -> Self {
        ModelSpec {
            name: name.to_string(),
            generators: Vec::new(),
            differentials: Vec::new(),
        }
    }

    pub fn generator_set(&self) -> Result<GeneratorSet, CliError> {
        Ok(GeneratorSet::new(self.generators.iter().map(|(n, d)| (n.clone(), *d)))?)
    }

    pub fn max_degree(&self) -> i64 {
        self.generators.iter().map(|g| g.1).max().unwrap_or(0)
    }

    pub fn degree_of(&self, gen: &str) -> Option<i64> {
        self.generators.iter().find(|g| g.0 == gen).map(|g| g.1)
    }

    /// The free dg Lie algebra up to `cutoff`, raised to the top generator
    /// degree if needed.
    pub fn build(&self, cutoff: i64) -> Result<FreeGradedLie, CliError> {
        let gens = self.generator_set()?;
        let mut d = Vec::new();
        for (name, e) in &self.differentials {
            let deg = self.degree_of(name).ok_or_else(|| {
                CliError::InvalidFile(format!("model {}: d of unknown generator {name:?}", self.name))
            })?;
            let x = e
                .evaluate(&gens, deg - 1)
                .map_err(|err| CliError::InvalidFile(format!("model {}: d {name}: {err}", self.name)))?;
            d.push((name.clone(), x));
        }
        Ok(FreeGradedLie::new(gens, d, cutoff.max(self.max_degree()))?)
    }

    /// `L(x1,x2)` style summary with the nonzero differentials.
    pub fn describe(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|(n, d)| format!("{n}:{d}")).collect();
        let mut s = format!("{} = L({})", self.name, gens.join(", "));
        for (n, e) in &self.differentials {
            s.push_str(&format!("; d {n} = {e}"));
        }
        s
    }
}

impl ModelFile {
    pub fn model(&self, name: &str) -> Result<&ModelSpec, CliError> {
        self.models
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| CliError::UnknownModel(name.to_string()))
    }

    pub fn map(&self, name: &str) -> Result<&MorphismSpec, CliError> {
        self.maps
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| CliError::UnknownModel(format!("map {name}")))
    }

    /// The named map, or the first one.
    pub fn choose_map(&self, name: Option<&str>) -> Result<&MorphismSpec, CliError> {
        match name {
            Some(n) => self.map(n),
            None => self
                .maps
                .first()
                .ok_or_else(|| CliError::InvalidInput("this command needs a model file with a map".into())),
        }
    }

    /// The named model; otherwise the target of the first map, otherwise
    /// the last model.
    pub fn choose_model(&self, name: Option<&str>) -> Result<&ModelSpec, CliError> {
        match (name, self.maps.first()) {
            (Some(n), _) => self.model(n),
            (None, Some(m)) => self.model(&m.target),
            (None, None) => self
                .models
                .last()
                .ok_or_else(|| CliError::InvalidInput("the model file declares no model".into())),
        }
    }

    /// Builds both ends at `cutoff` and checks the result is a chain map
    /// preserving brackets.
    pub fn build_map(&self, map: &MorphismSpec, cutoff: i64) -> Result<LieMorphism, CliError> {
        let src = self.model(&map.source)?;
        let tgt = self.model(&map.target)?;
        let a = Arc::new(src.build(cutoff)?);
        let x = Arc::new(tgt.build(cutoff)?);
        let tgt_gens = tgt.generator_set()?;
        let mut images: Vec<(String, LieElement)> = Vec::new();
        for (g, e) in &map.images {
            let deg = src.degree_of(g).ok_or_else(|| {
                CliError::InvalidFile(format!("map {}: {g:?} is not a generator of {}", map.name, src.name))
            })?;
            let v = e
                .evaluate(&tgt_gens, deg)
                .map_err(|err| CliError::InvalidFile(format!("map {} {g}: {err}", map.name)))?;
            images.push((g.clone(), v));
        }
        let f = LieMorphism::new(a, x, images)?;
        let check = verify_morphism(&f)?;
        if !check.holds {
            return Err(CliError::NotAMorphism(map.name.clone(), check.witness.unwrap_or_default()));
        }
        Ok(f)
    }

    /// Cross-references: distinct names, declared models, known generators.
    pub fn validate(&self) -> Result<(), CliError> {
        let mut seen = std::collections::BTreeSet::new();
        for m in &self.models {
            if !seen.insert(m.name.clone()) {
                return Err(CliError::InvalidFile(format!("model {} is declared twice", m.name)));
            }
            m.generator_set()?;
            for (n, _) in &m.differentials {
                if m.degree_of(n).is_none() {
                    return Err(CliError::InvalidFile(format!("model {}: d of unknown generator {n:?}", m.name)));
                }
            }
        }
        for f in &self.maps {
            if !seen.insert(f.name.clone()) {
                return Err(CliError::InvalidFile(format!("name {} is declared twice", f.name)));
            }
            let src = self.model(&f.source)?;
            self.model(&f.target)?;
            for (g, _) in &f.images {
                if src.degree_of(g).is_none() {
                    return Err(CliError::InvalidFile(format!(
                        "map {}: {g:?} is not a generator of {}",
                        f.name, src.name
                    )));
                }
            }
        }
        Ok(())
    }
}

fn strip_comment(line: &str) -> &str {
    let mut prev_space = true;
    for (i, c) in line.char_indices() {
        if c == '#' && prev_space {
            return &line[..i];
        }
        prev_space = c.is_whitespace();
    }
    line
}

fn err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_name(line: usize, s: Option<&str>, what: &str) -> Result<String, CliError> {
    let s = s.ok_or_else(|| err(line, format!("missing {what}")))?;
    let mut chars = s.chars();
    let ok = matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '#' | '\''));
    if !ok {
        return Err(err(line, format!("invalid {what} {s:?}")));
    }
    Ok(s.to_string())
}

fn parse_rhs(line: usize, rest: &str) -> Result<Expr, CliError> {
    let rest = rest.trim_start();
    let body = rest
        .strip_prefix('=')
        .ok_or_else(|| err(line, "expected '='"))?;
    parse_expr(body).map_err(|e| err(line, e.0))
}

/// Splits off the first whitespace-separated word.
fn word(s: &str) -> (Option<&str>, &str) {
    let s = s.trim_start();
    if s.is_empty() {
        return (None, s);
    }
    match s.find(char::is_whitespace) {
        Some(i) => (Some(&s[..i]), &s[i..]),
        None => (Some(s), ""),
    }
}

pub fn parse_model_file(text: &str) -> Result<ModelFile, CliError> {
    let mut file = ModelFile::default();
    for (k, raw) in text.lines().enumerate() {
        let n = k + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (head, rest) = word(line);
        match head {
            Some("model") => {
                let (name, tail) = word(rest);
                let name = parse_name(n, name, "model name")?;
                if !tail.trim().is_empty() || KEYWORDS.contains(&name.as_str()) {
                    return Err(err(n, "expected `model <name>`"));
                }
                file.models.push(ModelSpec::new(&name));
            }
            Some("generator") => {
                let (name, tail) = word(rest);
                let name = parse_name(n, name, "generator name")?;
                let (kw, tail) = word(tail);
                let (deg, tail) = word(tail);
                if kw != Some("degree") || !tail.trim().is_empty() {
                    return Err(err(n, "expected `generator <name> degree <int>`"));
                }
                let deg: i64 = deg
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| err(n, "the degree must be an integer"))?;
                let m = file
                    .models
                    .last_mut()
                    .ok_or_else(|| err(n, "generator before any `model` line"))?;
                m.generators.push((name, deg));
            }
            Some("d") => {
                let (name, tail) = word(rest);
                let name = parse_name(n, name, "generator name")?;
                let e = parse_rhs(n, tail)?;
                let m = file
                    .models
                    .last_mut()
                    .ok_or_else(|| err(n, "differential before any `model` line"))?;
                if m.differentials.iter().any(|(g, _)| *g == name) {
                    return Err(err(n, format!("second differential for {name}")));
                }
                m.differentials.push((name, e));
            }
            Some("map") => {
                let (name, tail) = word(rest);
                let name = parse_name(n, name, "map name")?;
                if KEYWORDS.contains(&name.as_str()) {
                    return Err(err(n, format!("{name} is reserved")));
                }
                let (colon, tail) = word(tail);
                let (src, tail) = word(tail);
                let (arrow, tail) = word(tail);
                let (tgt, tail) = word(tail);
                if colon != Some(":") || arrow != Some("->") || !tail.trim().is_empty() {
                    return Err(err(n, "expected `map <name> : <source> -> <target>`"));
                }
                file.maps.push(MorphismSpec {
                    name,
                    source: parse_name(n, src, "source model")?,
                    target: parse_name(n, tgt, "target model")?,
                    images: Vec::new(),
                });
            }
            Some(h) => {
                let f = file
                    .maps
                    .iter_mut()
                    .find(|m| m.name == h)
                    .ok_or_else(|| err(n, format!("unknown keyword or map {h:?}")))?;
                let (g, tail) = word(rest);
                let g = parse_name(n, g, "generator name")?;
                if f.images.iter().any(|(x, _)| *x == g) {
                    return Err(err(n, format!("second image for {g}")));
                }
                let e = parse_rhs(n, tail)?;
                f.images.push((g, e));
            }
            None => {}
        }
    }
    file.validate()?;
    Ok(file)
}

impl fmt::Display for ModelFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.models.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            writeln!(f, "model {}", m.name)?;
            for (n, d) in &m.generators {
                writeln!(f, "generator {n} degree {d}")?;
            }
            for (n, e) in &m.differentials {
                writeln!(f, "d {n} = {e}")?;
            }
        }
        for m in &self.maps {
            writeln!(f)?;
            writeln!(f, "map {} : {} -> {}", m.name, m.source, m.target)?;
            for (g, e) in &m.images {
                writeln!(f, "{} {g} = {e}", m.name)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PAIR: &str = "\
# projective line in the plane
model cp1
generator x1 degree 1

model cp2
generator x1 degree 1
generator x2 degree 3   # top cell
d x2 = 1/2*[x1,x1]

map i : cp1 -> cp2
i x1 = x1
";

    #[test]
    fn reads_a_pair() {
        let f = parse_model_file(PAIR).unwrap();
        assert_eq!(f.models.len(), 2);
        assert_eq!(f.models[1].generators, vec![("x1".into(), 1), ("x2".into(), 3)]);
        assert_eq!(f.maps[0].images.len(), 1);
        assert_eq!(parse_model_file(&f.to_string()).unwrap(), f);
        let i = f.build_map(&f.maps[0], 8).unwrap();
        assert!(i.is_free_extension());
        assert_eq!(f.choose_model(None).unwrap().name, "cp2");
    }

    #[test]
    fn hash_inside_names_is_not_a_comment() {
        let f = parse_model_file("model m\ngenerator x# degree 2 # dual\n").unwrap();
        assert_eq!(f.models[0].generators, vec![("x#".into(), 2)]);
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse_model_file("model m\ngenerator a degree one\n").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 2, .. }), "{e}");
        let e = parse_model_file("generator a degree 1\n").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 1, .. }));
        let e = parse_model_file("model m\ngenerator a degree 1\nj a = a\n").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 3, .. }));
        let e = parse_model_file("model m\nmap f : m -> n\n").unwrap_err();
        assert!(matches!(e, CliError::UnknownModel(_)));
    }

    #[test]
    fn rejects_bad_models() {
        let f = parse_model_file("model m\ngenerator a degree 1\ngenerator b degree 2\nd b = [a,a]\n").unwrap();
        assert!(f.models[0].build(6).is_err());
        let f = parse_model_file("model m\ngenerator a degree 2\ngenerator b degree 3\ngenerator c degree 4\nd b = a\nd c = b\n").unwrap();
        assert!(f.models[0].build(6).is_err());
    }

    #[test]
    fn refuses_maps_that_are_not_chain_maps() {
        let text = "model a\ngenerator u degree 2\nmodel x\ngenerator u degree 2\ngenerator v degree 3\nd v = u\nmap f : x -> a\nf v = 0\nf u = u\n";
        let f = parse_model_file(text).unwrap();
        let e = f.build_map(&f.maps[0], 6).unwrap_err();
        assert!(matches!(e, CliError::NotAMorphism(..)), "{e}");
    }
}
