//! Reaction networks, stochastic Petri nets, and the conversions between them.
//!
//! A [`ReactionNetwork`] is the diagram `(0,∞) ← T ⇉ K → ℕ^S`: transitions `T`
//! carry a rate and point from a source complex to a target complex, and each
//! complex in `K` is a vector of species counts.

mod parse;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use parse::parse_network;

/// Ordered set of species names with a reverse index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpeciesTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl SpeciesTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut table = Self::new();
        for name in names {
            let name = name.into();
            if name.is_empty() {
                return Err(Error::InvalidNetwork("empty species name".into()));
            }
            if table.index.contains_key(&name) {
                return Err(Error::InvalidNetwork(format!("duplicate species `{name}`")));
            }
            table.insert(name);
        }
        Ok(table)
    }

    /// Returns the index of `name`, appending it if absent.
    pub fn insert(&mut self, name: impl Into<String>) -> usize {
        let name = name.into();
        if let Some(&i) = self.index.get(&name) {
            return i;
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        i
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// A multiset of species, stored densely as one count per species.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Complex(pub Vec<u32>);

impl Complex {
    pub fn zero(num_species: usize) -> Self {
        Complex(vec![0; num_species])
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Total number of individuals in the complex.
    pub fn size(&self) -> u64 {
        self.0.iter().map(|&c| u64::from(c)).sum()
    }

    /// Renders the complex as DSL text, e.g. `2A + B` or `0`.
    pub fn display<'a>(&'a self, species: &'a SpeciesTable) -> ComplexDisplay<'a> {
        ComplexDisplay {
            complex: self,
            species,
        }
    }
}

pub struct ComplexDisplay<'a> {
    complex: &'a Complex,
    species: &'a SpeciesTable,
}

impl fmt::Display for ComplexDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.complex.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if c > 1 {
                write!(f, "{c}")?;
            }
            f.write_str(self.species.name(i))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub source: usize,
    pub target: usize,
    pub rate: f64,
}

fn check_rate(rate: f64) -> Result<()> {
    if rate.is_finite() && rate > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveRate(rate))
    }
}

/// A reaction written with species names: `(input, output, rate)`.
pub type NamedReaction<'a> = (&'a [(&'a str, u32)], &'a [(&'a str, u32)], f64);

/// A reaction network with rate constants.
///
/// Complexes are pairwise distinct; transitions may be self-loops and may be
/// parallel to one another.
#[derive(Debug, Clone, PartialEq)]
pub struct ReactionNetwork {
    species: SpeciesTable,
    complexes: Vec<Complex>,
    transitions: Vec<Transition>,
}

impl ReactionNetwork {
    pub fn new(
        species: SpeciesTable,
        complexes: Vec<Complex>,
        transitions: Vec<Transition>,
    ) -> Result<Self> {
        let s = species.len();
        let mut seen = HashMap::with_capacity(complexes.len());
        for (k, c) in complexes.iter().enumerate() {
            if c.len() != s {
                return Err(Error::InvalidNetwork(format!(
                    "complex {k} has {} entries for {s} species",
                    c.len()
                )));
            }
            if let Some(prev) = seen.insert(c.clone(), k) {
                return Err(Error::InvalidNetwork(format!(
                    "complexes {prev} and {k} are equal"
                )));
            }
        }
        for (i, t) in transitions.iter().enumerate() {
            if t.source >= complexes.len() || t.target >= complexes.len() {
                return Err(Error::InvalidNetwork(format!(
                    "transition {i} references a missing complex"
                )));
            }
            check_rate(t.rate)?;
        }
        Ok(Self {
            species,
            complexes,
            transitions,
        })
    }

    /// Builds a network from `(input, output, rate)` triples written with
    /// species names, e.g. `&[(&[("A", 2)], &[("B", 1)], 1.0)]`.
    pub fn from_reactions(species: &[&str], reactions: &[NamedReaction<'_>]) -> Result<Self> {
        let table = SpeciesTable::from_names(species.iter().copied())?;
        let to_complex = |terms: &[(&str, u32)]| -> Result<Complex> {
            let mut c = Complex::zero(table.len());
            for &(name, count) in terms {
                let i = table
                    .get(name)
                    .ok_or_else(|| Error::InvalidNetwork(format!("unknown species `{name}`")))?;
                c.0[i] += count;
            }
            Ok(c)
        };
        let mut builder = NetworkBuilder::new(table.clone());
        for (input, output, rate) in reactions {
            builder.add(to_complex(input)?, to_complex(output)?, *rate)?;
        }
        Ok(builder.finish())
    }

    pub fn species(&self) -> &SpeciesTable {
        &self.species
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn complexes(&self) -> &[Complex] {
        &self.complexes
    }

    pub fn num_complexes(&self) -> usize {
        self.complexes.len()
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Input complex vector `m(τ)`.
    pub fn input(&self, t: usize) -> &Complex {
        &self.complexes[self.transitions[t].source]
    }

    /// Output complex vector `n(τ)`.
    pub fn output(&self, t: usize) -> &Complex {
        &self.complexes[self.transitions[t].target]
    }

    /// Net change in species counts caused by transition `t`.
    pub fn stoichiometry(&self, t: usize) -> Vec<i64> {
        self.input(t)
            .0
            .iter()
            .zip(&self.output(t).0)
            .map(|(&m, &n)| i64::from(n) - i64::from(m))
            .collect()
    }

    /// Serializes to the line DSL. Parsing the result gives back an identical
    /// network whenever the complexes are listed in first-appearance order,
    /// which is always the case for parsed networks.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        if !self.species.is_empty() {
            out.push_str("species");
            for name in self.species.names() {
                out.push(' ');
                out.push_str(name);
            }
            out.push('\n');
        }
        for t in &self.transitions {
            out.push_str(&format!(
                "{} -> {} @ {:?}\n",
                self.complexes[t.source].display(&self.species),
                self.complexes[t.target].display(&self.species),
                t.rate
            ));
        }
        out
    }

    pub fn to_json(&self) -> NetworkJson {
        NetworkJson {
            species: self.species.names().to_vec(),
            complexes: self.complexes.iter().map(|c| c.0.clone()).collect(),
            transitions: self.transitions.clone(),
        }
    }

    pub fn from_json(json: &NetworkJson) -> Result<Self> {
        let species = SpeciesTable::from_names(json.species.iter().cloned())?;
        let complexes = json.complexes.iter().cloned().map(Complex).collect();
        Self::new(species, complexes, json.transitions.clone())
    }

    /// True when both networks have the same species, the same set of
    /// complexes, and the same transitions (compared by complex value, in
    /// order), regardless of how the complex list is ordered.
    pub fn equivalent_up_to_complex_order(&self, other: &Self) -> bool {
        if self.species != other.species || self.transitions.len() != other.transitions.len() {
            return false;
        }
        let mut a = self.complexes.clone();
        let mut b = other.complexes.clone();
        a.sort();
        b.sort();
        if a != b {
            return false;
        }
        (0..self.transitions.len()).all(|t| {
            self.input(t) == other.input(t)
                && self.output(t) == other.output(t)
                && self.transitions[t].rate == other.transitions[t].rate
        })
    }
}

/// Canonical JSON form of a network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkJson {
    pub species: Vec<String>,
    pub complexes: Vec<Vec<u32>>,
    pub transitions: Vec<Transition>,
}

/// Accumulates transitions while deduplicating complexes in first-appearance order.
#[derive(Debug)]
pub(crate) struct NetworkBuilder {
    species: SpeciesTable,
    complexes: Vec<Complex>,
    lookup: HashMap<Complex, usize>,
    transitions: Vec<Transition>,
}

impl NetworkBuilder {
    pub(crate) fn new(species: SpeciesTable) -> Self {
        Self {
            species,
            complexes: Vec::new(),
            lookup: HashMap::new(),
            transitions: Vec::new(),
        }
    }

    fn intern(&mut self, c: Complex) -> usize {
        if let Some(&k) = self.lookup.get(&c) {
            return k;
        }
        let k = self.complexes.len();
        self.lookup.insert(c.clone(), k);
        self.complexes.push(c);
        k
    }

    pub(crate) fn add(&mut self, input: Complex, output: Complex, rate: f64) -> Result<()> {
        check_rate(rate)?;
        let source = self.intern(input);
        let target = self.intern(output);
        self.transitions.push(Transition {
            source,
            target,
            rate,
        });
        Ok(())
    }

    pub(crate) fn finish(self) -> ReactionNetwork {
        ReactionNetwork {
            species: self.species,
            complexes: self.complexes,
            transitions: self.transitions,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PetriTransition {
    pub input: Complex,
    pub output: Complex,
    pub rate: f64,
}

/// A stochastic Petri net: species plus transitions given by input and
/// output count vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PetriNet {
    pub species: SpeciesTable,
    pub transitions: Vec<PetriTransition>,
}

impl PetriNet {
    pub fn new(species: SpeciesTable, transitions: Vec<PetriTransition>) -> Result<Self> {
        for t in &transitions {
            check_rate(t.rate)?;
            if t.input.len() != species.len() || t.output.len() != species.len() {
                return Err(Error::DimensionMismatch {
                    expected: species.len(),
                    found: t.input.len().max(t.output.len()),
                });
            }
        }
        Ok(Self {
            species,
            transitions,
        })
    }

    /// Input counts as a `species × transitions` matrix.
    pub fn input_matrix(&self) -> Vec<Vec<u32>> {
        (0..self.species.len())
            .map(|s| self.transitions.iter().map(|t| t.input.0[s]).collect())
            .collect()
    }

    pub fn output_matrix(&self) -> Vec<Vec<u32>> {
        (0..self.species.len())
            .map(|s| self.transitions.iter().map(|t| t.output.0[s]).collect())
            .collect()
    }
}

pub fn from_petri(p: &PetriNet) -> ReactionNetwork {
    let mut builder = NetworkBuilder::new(p.species.clone());
    for t in &p.transitions {
        let source = builder.intern(t.input.clone());
        let target = builder.intern(t.output.clone());
        builder.transitions.push(Transition {
            source,
            target,
            rate: t.rate,
        });
    }
    builder.finish()
}

pub fn to_petri(n: &ReactionNetwork) -> PetriNet {
    PetriNet {
        species: n.species.clone(),
        transitions: n
            .transitions
            .iter()
            .map(|t| PetriTransition {
                input: n.complexes[t.source].clone(),
                output: n.complexes[t.target].clone(),
                rate: t.rate,
            })
            .collect(),
    }
}
