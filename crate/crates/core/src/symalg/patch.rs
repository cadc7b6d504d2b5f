use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A coordinate patch: an ordered list of distinct coordinate names.
///
/// Two patches are equal when their coordinate lists are equal; the name is a
/// label only. The zero-dimensional patch (`Patch::point`) is the base of Lie
/// groups and Lie algebras.
#[derive(Clone)]
pub struct Patch(Arc<PatchInner>);

struct PatchInner {
    name: String,
    coords: Vec<String>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Patch {
    pub fn new<S: Into<String>, I, C>(name: S, coords: I) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: Into<String>,
    {
        let name = name.into();
        let coords: Vec<String> = coords.into_iter().map(Into::into).collect();
        if coords.is_empty() {
            return Err(Error::InvalidPatch(format!(
                "patch `{name}` needs at least one coordinate (use Patch::point)"
            )));
        }
        for (i, c) in coords.iter().enumerate() {
            if !is_identifier(c) {
                return Err(Error::InvalidPatch(format!("`{c}` is not an identifier")));
            }
            if coords[..i].contains(c) {
                return Err(Error::InvalidPatch(format!("coordinate `{c}` repeated")));
            }
        }
        Ok(Patch(Arc::new(PatchInner { name, coords })))
    }

    /// The zero-dimensional patch.
    pub fn point() -> Self {
        Patch(Arc::new(PatchInner {
            name: "pt".into(),
            coords: Vec::new(),
        }))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn coords(&self) -> &[String] {
        &self.0.coords
    }

    pub fn dim(&self) -> usize {
        self.0.coords.len()
    }

    pub fn index_of(&self, coord: &str) -> Option<usize> {
        self.0.coords.iter().position(|c| c == coord)
    }

    pub fn require_index(&self, coord: &str) -> Result<usize> {
        self.index_of(coord)
            .ok_or_else(|| Error::UnknownSymbol(coord.to_string()))
    }

    /// Same coordinates under a different label.
    pub fn renamed(&self, name: impl Into<String>) -> Self {
        Patch(Arc::new(PatchInner {
            name: name.into(),
            coords: self.0.coords.clone(),
        }))
    }

    pub(crate) fn ensure_same(&self, other: &Patch) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::PatchMismatch(self.to_string(), other.to_string()))
        }
    }
}

impl PartialEq for Patch {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.coords == other.0.coords
    }
}

impl Eq for Patch {}

impl fmt::Display for Patch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.0.name, self.0.coords.join(", "))
    }
}

impl fmt::Debug for Patch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(Patch::new("M", ["x", "x"]).is_err());
        assert!(Patch::new("M", Vec::<String>::new()).is_err());
        assert!(Patch::new("M", ["1x"]).is_err());
        assert_eq!(Patch::point().dim(), 0);
    }

    #[test]
    fn equality_ignores_label() {
        let a = Patch::new("M", ["x", "y"]).unwrap();
        let b = Patch::new("N", ["x", "y"]).unwrap();
        let c = Patch::new("M", ["y", "x"]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
