//! Stream types: lists of colors `∂ⁿ1` and `∂ⁿω` and their per-tick wire profiles.
//!
//! Ticks are numbered from 1. `Base(n)` carries one datum at tick `n + 1` only,
//! `Omega(n)` carries one datum at every tick `>= n + 1`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    Base(usize),
    Omega(usize),
}

impl Color {
    pub fn delay(self) -> usize {
        match self {
            Color::Base(n) | Color::Omega(n) => n,
        }
    }

    pub fn is_omega(self) -> bool {
        matches!(self, Color::Omega(_))
    }

    pub fn delayed(self, k: usize) -> Color {
        match self {
            Color::Base(n) => Color::Base(n + k),
            Color::Omega(n) => Color::Omega(n + k),
        }
    }

    pub fn active_at(self, tick: usize) -> bool {
        match self {
            Color::Base(n) => tick == n + 1,
            Color::Omega(n) => tick > n,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Color::Base(0) => write!(f, "1"),
            Color::Omega(0) => write!(f, "w"),
            Color::Base(n) => write!(f, "(d {n} 1)"),
            Color::Omega(n) => write!(f, "(d {n} w)"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeError {
    #[error("type {0} is not stratified")]
    NotStratified(StreamType),
    #[error("rising index {k} is below the degree {degree}")]
    KTooSmall { k: usize, degree: usize },
}

/// An ordered list of colors; the empty list is the unit `0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamType(pub Vec<Color>);

impl StreamType {
    pub fn unit() -> Self {
        StreamType(Vec::new())
    }

    pub fn new(colors: Vec<Color>) -> Self {
        StreamType(colors)
    }

    pub fn base(n: usize) -> Self {
        StreamType(vec![Color::Base(n)])
    }

    pub fn omega(n: usize) -> Self {
        StreamType(vec![Color::Omega(n)])
    }

    pub fn repeat(c: Color, times: usize) -> Self {
        StreamType(vec![c; times])
    }

    pub fn colors(&self) -> &[Color] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &StreamType) -> StreamType {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        StreamType(v)
    }

    pub fn delayed(&self, k: usize) -> StreamType {
        StreamType(self.0.iter().map(|c| c.delayed(k)).collect())
    }

    /// Inverse of `delayed(1)`, if every color has a positive delay.
    pub fn undelayed(&self) -> Option<StreamType> {
        self.0
            .iter()
            .map(|c| match *c {
                Color::Base(n) if n > 0 => Some(Color::Base(n - 1)),
                Color::Omega(n) if n > 0 => Some(Color::Omega(n - 1)),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(StreamType)
    }

    pub fn split_at(&self, i: usize) -> (StreamType, StreamType) {
        (StreamType(self.0[..i].to_vec()), StreamType(self.0[i..].to_vec()))
    }

    pub fn starts_with(&self, p: &StreamType) -> bool {
        self.0.starts_with(&p.0)
    }

    pub fn ends_with(&self, s: &StreamType) -> bool {
        self.0.ends_with(&s.0)
    }

    /// Largest delay, 0 for the unit.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|c| c.delay()).max().unwrap_or(0)
    }

    /// Slots (color indices) active at `tick`, in type order.
    pub fn profile_at(&self, tick: usize) -> Vec<usize> {
        assert!(tick >= 1, "ticks start at 1");
        (0..self.0.len()).filter(|&i| self.0[i].active_at(tick)).collect()
    }

    pub fn arity_at(&self, tick: usize) -> usize {
        self.0.iter().filter(|c| c.active_at(tick)).count()
    }

    /// First tick from which the profile no longer changes.
    pub fn stable_from(&self) -> usize {
        self.degree() + 2
    }

    pub fn is_stratified(&self) -> bool {
        let d = self.degree();
        let mut seen_omega = false;
        let mut last = 0;
        for c in &self.0 {
            match *c {
                Color::Base(n) => {
                    if seen_omega || n < last {
                        return false;
                    }
                    last = n;
                }
                Color::Omega(n) => {
                    if n != d {
                        return false;
                    }
                    seen_omega = true;
                }
            }
        }
        true
    }

    /// The rising `δᵏ a` of a stratified type.
    pub fn rise(&self, k: usize) -> Result<StreamType, TypeError> {
        if !self.is_stratified() {
            return Err(TypeError::NotStratified(self.clone()));
        }
        let d = self.degree();
        if k < d {
            return Err(TypeError::KTooSmall { k, degree: d });
        }
        let omegas = self.0.iter().filter(|c| c.is_omega()).count();
        let mut out: Vec<Color> = self.0.iter().copied().filter(|c| !c.is_omega()).collect();
        if omegas > 0 {
            for j in d..k {
                out.extend(std::iter::repeat_n(Color::Base(j), omegas));
            }
            out.extend(std::iter::repeat_n(Color::Omega(k), omegas));
        }
        Ok(StreamType(out))
    }
}

impl fmt::Display for StreamType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.len() {
            0 => write!(f, "0"),
            1 => write!(f, "{}", self.0[0]),
            _ => {
                write!(f, "(+")?;
                for c in &self.0 {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl From<Vec<Color>> for StreamType {
    fn from(v: Vec<Color>) -> Self {
        StreamType(v)
    }
}

pub fn degree(a: &StreamType) -> usize {
    a.degree()
}

pub fn profile_at(a: &StreamType, k: usize) -> Vec<usize> {
    a.profile_at(k)
}

pub fn rise(a: &StreamType, k: usize) -> Result<StreamType, TypeError> {
    a.rise(k)
}

fn color_disjoint(x: Color, y: Color) -> bool {
    match (x, y) {
        (Color::Base(i), Color::Base(j)) => i != j,
        (Color::Base(i), Color::Omega(j)) | (Color::Omega(j), Color::Base(i)) => i < j,
        (Color::Omega(_), Color::Omega(_)) => false,
    }
}

/// The disjointness relation `*`: no tick at which both types carry data.
pub fn disjoint(a: &StreamType, b: &StreamType) -> bool {
    a.0.iter().all(|&x| b.0.iter().all(|&y| color_disjoint(x, y)))
}

/// Equal per-tick arities at every tick.
pub fn types_equivalent(a: &StreamType, b: &StreamType) -> bool {
    let last = a.stable_from().max(b.stable_from());
    (1..=last).all(|k| a.arity_at(k) == b.arity_at(k))
}
