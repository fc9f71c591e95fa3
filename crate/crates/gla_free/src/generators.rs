use std::collections::HashMap;

use crate::error::LieError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

/// Ordered generators; the order fixes the letter order of tensor words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratorSet {
    gens: Vec<Generator>,
    index: HashMap<String, usize>,
}

pub(crate) fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_' || c == '#' || c == '\'')
}

impl GeneratorSet {
    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, i64)>) -> Result<Self, LieError> {
        let mut set = GeneratorSet::default();
        for (name, degree) in gens {
            set.push(name.into(), degree)?;
        }
        Ok(set)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    fn push(&mut self, name: String, degree: i64) -> Result<(), LieError> {
        if !valid_name(&name) {
            return Err(LieError::InvalidGeneratorName(name));
        }
        if degree < 1 {
            return Err(LieError::NonPositiveDegree { name, degree });
        }
        if self.index.contains_key(&name) {
            return Err(LieError::DuplicateGenerator(name));
        }
        if self.gens.len() >= u8::MAX as usize {
            return Err(LieError::InvalidModel("too many generators".into()));
        }
        self.index.insert(name.clone(), self.gens.len());
        self.gens.push(Generator { name, degree });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        self.gens.iter()
    }

    pub fn get(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.gens.iter().map(|g| g.degree).collect()
    }

    pub fn max_degree(&self) -> i64 {
        self.gens.iter().map(|g| g.degree).max().unwrap_or(0)
    }
}
