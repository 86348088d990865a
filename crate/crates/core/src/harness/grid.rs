//! Parameter grids such as `k=3,4;d=3..5;m=d+1..d+3`.
//!
//! Axes are expanded in order, so a bound may refer to any axis declared
//! before it. Once `k` and `m` are bound, `n = m(k-1)+1` is available too.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("cannot parse grid item `{0}`")]
    Syntax(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("axis `{0}` appears twice")]
    Duplicate(String),
    #[error("value of `{0}` is negative")]
    Negative(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Atom {
    Lit(i64),
    Var(String),
}

/// A signed sum of literals and variables, such as `n-m+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Term(Vec<(i64, Atom)>);

impl Term {
    fn parse(s: &str) -> Result<Term, GridError> {
        let s = s.trim();
        let err = || GridError::Syntax(s.to_string());
        let mut parts = Vec::new();
        let mut sign = 1;
        let mut current = String::new();
        let mut flush = |sign: i64, text: &mut String| -> Result<(), GridError> {
            let word = text.trim();
            if word.is_empty() {
                return Err(err());
            }
            let atom = match word.parse::<i64>() {
                Ok(v) => Atom::Lit(v),
                Err(_) if word.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                    && !word.starts_with(|c: char| c.is_ascii_digit()) =>
                {
                    Atom::Var(word.to_string())
                }
                Err(_) => return Err(err()),
            };
            parts.push((sign, atom));
            text.clear();
            Ok(())
        };
        for c in s.chars() {
            match c {
                '+' | '-' => {
                    flush(sign, &mut current)?;
                    sign = if c == '-' { -1 } else { 1 };
                }
                _ => current.push(c),
            }
        }
        flush(sign, &mut current)?;
        Ok(Term(parts))
    }

    fn eval(&self, env: &BTreeMap<String, usize>) -> Result<i64, GridError> {
        let mut total = 0;
        for (sign, atom) in &self.0 {
            let v = match atom {
                Atom::Lit(v) => *v,
                Atom::Var(name) => *env
                    .get(name)
                    .ok_or_else(|| GridError::UnknownVariable(name.clone()))? as i64,
            };
            total += sign * v;
        }
        Ok(total)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Item {
    One(Term),
    Range(Term, Term),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Axis {
    name: String,
    text: String,
    items: Vec<Item>,
}

impl Axis {
    fn values(&self, env: &BTreeMap<String, usize>) -> Result<Vec<usize>, GridError> {
        let mut out = Vec::new();
        let check = |v: i64| {
            usize::try_from(v).map_err(|_| GridError::Negative(self.name.clone()))
        };
        for item in &self.items {
            match item {
                Item::One(t) => out.push(check(t.eval(env)?)?),
                Item::Range(a, b) => {
                    let (a, b) = (a.eval(env)?, b.eval(env)?);
                    for v in a..=b {
                        out.push(check(v)?);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// An ordered list of named axes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Grid {
    axes: Vec<Axis>,
}

/// One point of a grid.
pub type Cell = BTreeMap<String, usize>;

impl Grid {
    pub fn parse(s: &str) -> Result<Grid, GridError> {
        let mut grid = Grid::default();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, rhs) = part
                .split_once('=')
                .ok_or_else(|| GridError::Syntax(part.to_string()))?;
            let name = name.trim().to_string();
            if grid.axes.iter().any(|a| a.name == name) {
                return Err(GridError::Duplicate(name));
            }
            let items = rhs
                .split(',')
                .map(|item| match item.split_once("..") {
                    Some((a, b)) => Ok(Item::Range(Term::parse(a)?, Term::parse(b)?)),
                    None => Ok(Item::One(Term::parse(item)?)),
                })
                .collect::<Result<Vec<_>, GridError>>()?;
            grid.axes.push(Axis {
                name,
                text: rhs.trim().to_string(),
                items,
            });
        }
        Ok(grid)
    }

    /// `defaults` with every axis named in `self` replaced by this grid's
    /// version; axes only in `self` go at the end.
    pub fn over(&self, defaults: &Grid) -> Grid {
        let mut axes: Vec<Axis> = defaults
            .axes
            .iter()
            .map(|d| self.axes.iter().find(|a| a.name == d.name).unwrap_or(d).clone())
            .collect();
        for a in &self.axes {
            if !axes.iter().any(|b| b.name == a.name) {
                axes.push(a.clone());
            }
        }
        Grid { axes }
    }

    pub fn has(&self, name: &str) -> bool {
        self.axes.iter().any(|a| a.name == name)
    }

    /// Values of an axis whose bounds are constants.
    pub fn values(&self, name: &str) -> Result<Vec<usize>, GridError> {
        match self.axes.iter().find(|a| a.name == name) {
            Some(axis) => axis.values(&BTreeMap::new()),
            None => Err(GridError::UnknownVariable(name.to_string())),
        }
    }

    /// First value of a constant axis, if present.
    pub fn scalar(&self, name: &str) -> Result<Option<usize>, GridError> {
        if !self.has(name) {
            return Ok(None);
        }
        Ok(self.values(name)?.first().copied())
    }

    /// Every point of the grid, restricted to the listed axes, in
    /// lexicographic order of declaration.
    pub fn cells(&self, axes: &[&str]) -> Result<Vec<Cell>, GridError> {
        let chosen: Vec<&Axis> = self
            .axes
            .iter()
            .filter(|a| axes.contains(&a.name.as_str()))
            .collect();
        for name in axes {
            if !chosen.iter().any(|a| a.name == *name) {
                return Err(GridError::UnknownVariable(name.to_string()));
            }
        }
        let mut out = Vec::new();
        expand(&chosen, Cell::new(), &mut out)?;
        Ok(out)
    }
}

fn expand(axes: &[&Axis], env: Cell, out: &mut Vec<Cell>) -> Result<(), GridError> {
    let Some((axis, rest)) = axes.split_first() else {
        out.push(env);
        return Ok(());
    };
    for v in axis.values(&env)? {
        let mut next = env.clone();
        next.insert(axis.name.clone(), v);
        if let (Some(&k), Some(&m), false) = (next.get("k"), next.get("m"), next.contains_key("n")) {
            if k >= 1 {
                next.insert("n".into(), m * (k - 1) + 1);
            }
        }
        expand(rest, next, out)?;
    }
    Ok(())
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.axes.iter().map(|a| format!("{}={}", a.name, a.text)).collect();
        f.write_str(&parts.join(";"))
    }
}

impl std::str::FromStr for Grid {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Grid, GridError> {
        Grid::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triples(cells: &[Cell]) -> Vec<(usize, usize, usize)> {
        cells.iter().map(|c| (c["k"], c["d"], c["m"])).collect()
    }

    #[test]
    fn dependent_ranges() {
        let g = Grid::parse("k=3,4;d=3..4;m=d+1..d+2").unwrap();
        let cells = g.cells(&["k", "d", "m"]).unwrap();
        assert_eq!(
            triples(&cells),
            vec![
                (3, 3, 4), (3, 3, 5), (3, 4, 5), (3, 4, 6),
                (4, 3, 4), (4, 3, 5), (4, 4, 5), (4, 4, 6),
            ]
        );
        assert_eq!(cells[0]["n"], 9);
    }

    #[test]
    fn derived_n() {
        let g = Grid::parse("k=3;m=3;q=n-m+1..n-1").unwrap();
        let qs: Vec<usize> = g.cells(&["k", "m", "q"]).unwrap().iter().map(|c| c["q"]).collect();
        assert_eq!(qs, vec![5, 6]);
    }

    #[test]
    fn override_keeps_order() {
        let defaults = Grid::parse("k=3,4;d=3..5;m=d+1..d+3").unwrap();
        let g = Grid::parse("m=d+1;k=3").unwrap().over(&defaults);
        assert_eq!(g.to_string(), "k=3;d=3..5;m=d+1");
        assert_eq!(g.cells(&["k", "d", "m"]).unwrap().len(), 3);
    }

    #[test]
    fn errors() {
        assert!(matches!(Grid::parse("k"), Err(GridError::Syntax(_))));
        assert!(matches!(Grid::parse("k=1;k=2"), Err(GridError::Duplicate(_))));
        let g = Grid::parse("m=d+1").unwrap();
        assert!(matches!(g.cells(&["m"]), Err(GridError::UnknownVariable(_))));
        let g = Grid::parse("m=x-5;x=1").unwrap();
        assert!(g.cells(&["m", "x"]).is_err());
        assert!(matches!(Grid::parse("m=0-1").unwrap().cells(&["m"]), Err(GridError::Negative(_))));
        assert!(matches!(Grid::parse("m=2x"), Err(GridError::Syntax(_))));
        assert!(matches!(Grid::parse("m=-1"), Err(GridError::Syntax(_))));
    }

    #[test]
    fn empty_range_gives_no_cells() {
        let g = Grid::parse("d=5..4").unwrap();
        assert!(g.cells(&["d"]).unwrap().is_empty());
    }
}
