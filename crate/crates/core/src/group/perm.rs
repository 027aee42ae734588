use std::fmt;
use std::str::FromStr;

use crate::error::{input, Error, Result};

/// A permutation of `0..degree`, stored as its image array.
///
/// Products act on the right: `a.then(&b)` maps `p` to `b(a(p))`, so the
/// group product `ab` means "first `a`, then `b`". Conjugation `x^y` is
/// `y⁻¹xy` under this convention.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u16).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n > u16::MAX as usize {
            return input(format!("degree {n} too large"));
        }
        let mut seen = vec![false; n];
        for &p in &images {
            if p >= n || seen[p] {
                return input(format!("not a bijection on 0..{n}: {images:?}"));
            }
            seen[p] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|p| p as u16).collect(),
        })
    }

    /// Parses cycle notation such as `(0 1 2)(3 4)`; `()` is the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return input(format!("expected '(' in cycle notation: {text:?}"));
            };
            let Some(close) = body.find(')') else {
                return input(format!("unclosed cycle in {text:?}"));
            };
            let points = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::Input(format!("bad point {s:?} in {text:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            for (i, &p) in points.iter().enumerate() {
                if p >= degree {
                    return input(format!("point {p} outside degree {degree}"));
                }
                if touched[p] {
                    return input(format!("point {p} repeated in {text:?}"));
                }
                touched[p] = true;
                images[p] = points[(i + 1) % points.len()];
            }
            rest = body[close + 1..].trim_start();
        }
        Permutation::from_images(images)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, p: usize) -> usize {
        self.images[p] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&p| p as usize)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&p| other.images[p as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u16; self.degree()];
        for (p, &q) in self.images.iter().enumerate() {
            images[q as usize] = p as u16;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(p, &q)| p == q as usize)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.image(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p);
                p = self.image(p);
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A group given by permutation generators, as read from a group spec file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Line 1 (after comments) is `degree N`; every further non-empty line
    /// is one permutation in cycle notation. `#` starts a comment.
    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Input("empty group spec".into()))?;
        let degree = header
            .strip_prefix("degree")
            .map(str::trim)
            .and_then(|d| d.parse::<usize>().ok())
            .ok_or_else(|| Error::Input(format!("expected `degree N`, got {header:?}")))?;
        let generators = lines
            .map(|l| Permutation::parse_cycles(l, degree))
            .collect::<Result<Vec<_>>>()?;
        if generators.is_empty() {
            return input("group spec lists no generators");
        }
        Ok(GroupSpec { degree, generators })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "degree {}", self.degree)?;
        for g in &self.generators {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let p = Permutation::parse_cycles("(0 1 2)(3 4)", 6).unwrap();
        assert_eq!(p.image(0), 1);
        assert_eq!(p.image(2), 0);
        assert_eq!(p.image(4), 3);
        assert_eq!(p.image(5), 5);
        assert_eq!(p.to_string(), "(0 1 2)(3 4)");
        assert!(Permutation::parse_cycles("()", 3).unwrap().is_identity());
    }

    #[test]
    fn rejects_bad_cycles() {
        assert!(Permutation::parse_cycles("(0 1 0)", 3).is_err());
        assert!(Permutation::parse_cycles("(0 5)", 3).is_err());
        assert!(Permutation::parse_cycles("(0 1", 3).is_err());
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn composition_acts_on_the_right() {
        let a = Permutation::parse_cycles("(0 1)", 3).unwrap();
        let b = Permutation::parse_cycles("(1 2)", 3).unwrap();
        // 0 -a-> 1 -b-> 2
        assert_eq!(a.then(&b).image(0), 2);
        assert!(a.then(&a.inverse()).is_identity());
    }

    #[test]
    fn spec_file() {
        let spec: GroupSpec = "# S3\ndegree 3\n(0 1) # transposition\n\n(0 1 2)\n"
            .parse()
            .unwrap();
        assert_eq!(spec.degree, 3);
        assert_eq!(spec.generators.len(), 2);
        assert!("degree 3\n".parse::<GroupSpec>().is_err());
        assert!("deg 3\n(0 1)".parse::<GroupSpec>().is_err());
    }
}
