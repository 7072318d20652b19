//! Pauli strings in symplectic form and the graph-state stabilizers.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    /// Exponent `k` in `self · other = i^k · (letter)`.
    fn product_phase(self, other: Letter) -> u8 {
        use Letter::*;
        match (self, other) {
            (X, Y) | (Y, Z) | (Z, X) => 1,
            (Y, X) | (Z, Y) | (X, Z) => 3,
            _ => 0,
        }
    }
}

/// A tensor product of single-qubit Paulis with a global phase `i^phase`.
///
/// Letters are stored as an x-bit set and a z-bit set; `Y` sets both.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: VertexSet,
    z: VertexSet,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            n,
            x: VertexSet::new(),
            z: VertexSet::new(),
            phase: 0,
        }
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut p = PauliString::identity(letters.len());
        for (i, &l) in letters.iter().enumerate() {
            p.set(i, l);
        }
        p
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn letter(&self, i: usize) -> Letter {
        Letter::from_bits(self.x.contains(i), self.z.contains(i))
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.n).map(|i| self.letter(i))
    }

    pub fn set(&mut self, i: usize, l: Letter) {
        assert!(i < self.n, "site {i} out of range for length {}", self.n);
        let (x, z) = l.bits();
        if x {
            self.x.insert(i);
        } else {
            self.x.remove(i);
        }
        if z {
            self.z.insert(i);
        } else {
            self.z.remove(i);
        }
    }

    /// Sites carrying X or Y.
    pub fn x_support(&self) -> &VertexSet {
        &self.x
    }

    /// Sites carrying Z or Y.
    pub fn z_support(&self) -> &VertexSet {
        &self.z
    }

    /// Global phase as a power of `i` (0..4).
    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// `+1` or `-1` for Hermitian strings; `None` when the phase is `±i`.
    pub fn sign(&self) -> Option<i8> {
        match self.phase {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn negated(&self) -> Self {
        let mut p = self.clone();
        p.phase = (p.phase + 2) % 4;
        p
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase % 4;
        self
    }

    /// True when the strings commute, i.e. an even number of sites anticommute.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::LengthMismatch(self.n, other.n));
        }
        let a = self.x.intersection(&other.z).len();
        let b = self.z.intersection(&other.x).len();
        Ok((a + b).is_multiple_of(2))
    }

    /// Operator product `self · other`, phase included.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.n != other.n {
            return Err(Error::LengthMismatch(self.n, other.n));
        }
        let mut phase = self.phase + other.phase;
        let support = self.x.union(&self.z).union(&other.x).union(&other.z);
        for i in support.iter() {
            phase += self.letter(i).product_phase(other.letter(i));
        }
        Ok(PauliString {
            n: self.n,
            x: sym_diff(&self.x, &other.x),
            z: sym_diff(&self.z, &other.z),
            phase: phase % 4,
        })
    }

    /// Removes the sites in `drop`, keeping the remaining order. Returns the
    /// shortened string and the letters that were removed.
    pub fn restrict(&self, drop: &VertexSet) -> Result<(PauliString, Vec<(usize, Letter)>)> {
        if let Some(m) = drop.last() {
            if m >= self.n {
                return Err(Error::IndexOutOfRange { index: m, n: self.n });
            }
        }
        if drop.len() == self.n {
            return Err(Error::DropAllSites);
        }
        let mut kept = Vec::with_capacity(self.n - drop.len());
        let mut dropped = Vec::with_capacity(drop.len());
        for i in 0..self.n {
            if drop.contains(i) {
                dropped.push((i, self.letter(i)));
            } else {
                kept.push(self.letter(i));
            }
        }
        Ok((PauliString::from_letters(&kept).with_phase(self.phase), dropped))
    }

    /// Re-embeds a string on `keep.len()` sites into `n` sites, with identity
    /// on the sites outside `keep`.
    pub fn embed(&self, n: usize, keep: &VertexSet) -> Result<PauliString> {
        if keep.len() != self.n {
            return Err(Error::LengthMismatch(keep.len(), self.n));
        }
        let mut p = PauliString::identity(n).with_phase(self.phase);
        for (local, site) in keep.iter().enumerate() {
            if site >= n {
                return Err(Error::IndexOutOfRange { index: site, n });
            }
            p.set(site, self.letter(local));
        }
        Ok(p)
    }
}

fn sym_diff(a: &VertexSet, b: &VertexSet) -> VertexSet {
    a.union(b).difference(&a.intersection(b))
}

/// `S_i = X_i ⊗_{j ∈ N(i)} Z_j`.
pub fn stabilizer(g: &Graph, i: usize) -> Result<PauliString> {
    let nbrs = g.neighborhood(i)?;
    let mut p = PauliString::identity(g.n());
    p.set(i, Letter::X);
    for j in nbrs.iter() {
        p.set(j, Letter::Z);
    }
    Ok(p)
}

/// All `n` stabilizers, indexed by vertex.
pub fn stabilizers(g: &Graph) -> Vec<PauliString> {
    (0..g.n()).map(|i| stabilizer(g, i).expect("vertex in range")).collect()
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Accepts an optional `+`, `-`, `+i`, `-i` prefix followed by `IXYZ` letters.
    fn from_str(s: &str) -> Result<Self> {
        let (phase, body) = if let Some(r) = s.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2, r)
        } else {
            (0, s)
        };
        let letters = body
            .chars()
            .enumerate()
            .map(|(k, c)| match c {
                'I' => Ok(Letter::I),
                'X' => Ok(Letter::X),
                'Y' => Ok(Letter::Y),
                'Z' => Ok(Letter::Z),
                other => Err(Error::Parse {
                    line: 1,
                    column: k + 1 + (s.len() - body.len()),
                    message: format!("unexpected Pauli letter `{other}`"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::from_letters(&letters).with_phase(phase))
    }
}
