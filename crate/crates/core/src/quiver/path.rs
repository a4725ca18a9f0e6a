use crate::error::{Error, Result};
use crate::quiver::{Arrow, Vertex};

/// A path in a quiver: a start vertex followed by composable arrows.
/// Paths are ordered by start vertex, then lexicographically by arrows.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    start: Vertex,
    arrows: Vec<Arrow>,
}

impl Path {
    pub fn trivial(v: Vertex) -> Self {
        Path { start: v, arrows: Vec::new() }
    }

    pub fn arrow(a: Arrow) -> Self {
        Path { start: a.src, arrows: vec![a] }
    }

    pub fn new(start: Vertex, arrows: Vec<Arrow>) -> Result<Self> {
        let mut at = start;
        for a in &arrows {
            if a.src != at {
                return Err(Error::Malformed(format!("arrows do not compose at {at:?}")));
            }
            at = a.dst;
        }
        Ok(Path { start, arrows })
    }

    pub(crate) fn from_parts(start: Vertex, arrows: Vec<Arrow>) -> Self {
        Path { start, arrows }
    }

    pub fn start(&self) -> Vertex {
        self.start
    }

    pub fn end(&self) -> Vertex {
        self.arrows.last().map_or(self.start, |a| a.dst)
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self` followed by `next`, if they compose.
    pub fn then(&self, next: &Path) -> Option<Path> {
        if self.end() != next.start {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&next.arrows);
        Some(Path { start: self.start, arrows })
    }

    /// `p` with `self = p.then(suffix)`.
    pub fn strip_suffix(&self, suffix: &Path) -> Option<Path> {
        if self.end() != suffix.end() || suffix.arrows.len() > self.arrows.len() {
            return None;
        }
        let k = self.arrows.len() - suffix.arrows.len();
        (self.arrows[k..] == suffix.arrows[..]).then(|| Path { start: self.start, arrows: self.arrows[..k].to_vec() })
    }

    /// `p` with `self = prefix.then(p)`.
    pub fn strip_prefix(&self, prefix: &Path) -> Option<Path> {
        if self.start != prefix.start || prefix.arrows.len() > self.arrows.len() {
            return None;
        }
        let k = prefix.arrows.len();
        (self.arrows[..k] == prefix.arrows[..]).then(|| Path { start: prefix.end(), arrows: self.arrows[k..].to_vec() })
    }

    /// The same path in the opposite quiver.
    pub fn opposite(&self) -> Path {
        Path { start: self.end(), arrows: self.arrows.iter().rev().map(|a| a.flipped()).collect() }
    }
}
