//! Constructors for standard transitive groups used in tests and benchmarks.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::io::parse_generators;
use crate::perm::{GeneratorSet, Permutation};

const M24_TEXT: &str = include_str!("../data/m24.txt");

/// A group family member. Textual form: `cyclic(6)`, `dihedral(8)`,
/// `symmetric(5)`, `alternating(5)`, `subsets(5,2)`,
/// `wreath(alternating(8),2)`, `product(3,2)`, `m24`, `file(path)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    /// `S_m` on the `k`-subsets of `{0, …, m-1}`, ranked colexicographically.
    Subsets {
        m: usize,
        k: usize,
    },
    /// `inner ≀ S_d` on `m·d` points with blocks `{jm, …, jm+m-1}`.
    WreathImprimitive {
        inner: Box<GroupSpec>,
        d: usize,
    },
    /// `S_m ≀ S_d` on `m^d` tuples; digit 0 is least significant.
    ProductAction {
        m: usize,
        d: usize,
    },
    M24,
    FromFile(PathBuf),
}

impl GroupSpec {
    pub fn wreath(inner: GroupSpec, d: usize) -> Self {
        GroupSpec::WreathImprimitive {
            inner: Box::new(inner),
            d,
        }
    }

    /// Realizes the generators; fails on bad parameters or intransitive output.
    pub fn build(&self) -> Result<GeneratorSet> {
        let gens = self.build_raw()?;
        if !gens.is_transitive() {
            return Err(Error::arg(format!("{self} is not transitive")));
        }
        Ok(gens)
    }

    fn build_raw(&self) -> Result<GeneratorSet> {
        match self {
            GroupSpec::Cyclic(n) => {
                let n = positive(*n, "n")?;
                GeneratorSet::new(n, vec![shift(n)])
            }
            GroupSpec::Dihedral(n) => {
                let n = positive(*n, "n")?;
                let reflection = Permutation::from_images((0..n).map(|p| (n - p) % n).collect())?;
                GeneratorSet::new(n, vec![shift(n), reflection])
            }
            GroupSpec::Symmetric(m) => {
                let m = positive(*m, "m")?;
                GeneratorSet::new(m, symmetric_gens(m))
            }
            GroupSpec::Alternating(m) => {
                let m = positive(*m, "m")?;
                GeneratorSet::new(m, alternating_gens(m)?)
            }
            GroupSpec::Subsets { m, k } => subsets(*m, *k),
            GroupSpec::WreathImprimitive { inner, d } => {
                let inner = inner.build()?;
                wreath_imprimitive(&inner, *d)
            }
            GroupSpec::ProductAction { m, d } => product_action(*m, *d),
            GroupSpec::M24 => parse_generators(M24_TEXT),
            GroupSpec::FromFile(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                parse_generators(&text)
            }
        }
    }

    /// `log₂ |G|` for families whose order is known in closed form.
    pub fn log2_order(&self) -> Option<f64> {
        Some(match self {
            GroupSpec::Cyclic(n) => (*n as f64).log2(),
            GroupSpec::Dihedral(n) => match n {
                1 => 0.0,
                2 => 1.0,
                n => (2.0 * *n as f64).log2(),
            },
            GroupSpec::Symmetric(m) => log2_factorial(*m),
            GroupSpec::Alternating(m) => (log2_factorial(*m) - 1.0).max(0.0),
            GroupSpec::Subsets { m, .. } => log2_factorial(*m),
            GroupSpec::WreathImprimitive { inner, d } => {
                *d as f64 * inner.log2_order()? + log2_factorial(*d)
            }
            GroupSpec::ProductAction { m, d } => {
                *d as f64 * log2_factorial(*m) + log2_factorial(*d)
            }
            GroupSpec::M24 => 244_823_040f64.log2(),
            GroupSpec::FromFile(_) => return None,
        })
    }

    /// Short family name used in benchmark tables.
    pub fn family(&self) -> &'static str {
        match self {
            GroupSpec::Cyclic(_) => "cyclic",
            GroupSpec::Dihedral(_) => "dihedral",
            GroupSpec::Symmetric(_) => "symmetric",
            GroupSpec::Alternating(_) => "alternating",
            GroupSpec::Subsets { .. } => "subsets",
            GroupSpec::WreathImprimitive { .. } => "wreath",
            GroupSpec::ProductAction { .. } => "product",
            GroupSpec::M24 => "m24",
            GroupSpec::FromFile(_) => "file",
        }
    }

    /// The block system a wreath-imprimitive member is built to preserve.
    pub fn declared_blocks(&self) -> Option<Vec<Vec<usize>>> {
        match self {
            GroupSpec::WreathImprimitive { inner, d } => {
                let m = inner.build().ok()?.degree();
                Some((0..*d).map(|j| (j * m..(j + 1) * m).collect()).collect())
            }
            _ => None,
        }
    }
}

fn positive(x: usize, name: &str) -> Result<usize> {
    if x == 0 {
        Err(Error::arg(format!("{name} must be at least 1")))
    } else {
        Ok(x)
    }
}

fn shift(n: usize) -> Permutation {
    Permutation::from_images((0..n).map(|p| (p + 1) % n).collect()).unwrap()
}

pub fn log2_factorial(m: usize) -> f64 {
    (2..=m).map(|i| (i as f64).log2()).sum()
}

fn symmetric_gens(m: usize) -> Vec<Permutation> {
    match m {
        1 => vec![Permutation::identity(1)],
        2 => vec![shift(2)],
        _ => vec![shift(m), Permutation::from_cycles(m, &[[0, 1]]).unwrap()],
    }
}

fn alternating_gens(m: usize) -> Result<Vec<Permutation>> {
    Ok(match m {
        1 => vec![Permutation::identity(1)],
        2 => return Err(Error::arg("alternating(2) is not transitive")),
        3 => vec![shift(3)],
        _ => {
            let long: Vec<usize> = if m % 2 == 1 {
                (0..m).collect()
            } else {
                (1..m).collect()
            };
            vec![
                Permutation::from_cycles(m, &[long])?,
                Permutation::from_cycles(m, &[[0, 1, 2]])?,
            ]
        }
    })
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Colexicographic rank of a sorted subset: `Σ_i C(c_i, i+1)`.
pub fn colex_rank(subset: &[usize]) -> usize {
    subset
        .iter()
        .enumerate()
        .map(|(i, &c)| binomial(c, i + 1))
        .sum()
}

/// All `k`-subsets of `{0, …, m-1}` in colexicographic order.
pub fn colex_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(m, k));
    let mut cur: Vec<usize> = (0..k).collect();
    if k > m {
        return out;
    }
    loop {
        out.push(cur.clone());
        // colex successor: bump the first element that can move
        let mut i = 0;
        while i < k
            && (if i + 1 < k {
                cur[i] + 1 == cur[i + 1]
            } else {
                cur[i] + 1 == m
            })
        {
            i += 1;
        }
        if i == k {
            return out;
        }
        cur[i] += 1;
        for (j, c) in cur.iter_mut().enumerate().take(i) {
            *c = j;
        }
    }
}

fn subsets(m: usize, k: usize) -> Result<GeneratorSet> {
    if k == 0 || k >= m {
        return Err(Error::arg(format!("subsets({m},{k}) needs 1 <= k < m")));
    }
    let sets = colex_subsets(m, k);
    let gens = symmetric_gens(m)
        .iter()
        .map(|g| {
            let images = sets
                .iter()
                .map(|s| {
                    let mut t: Vec<usize> = s.iter().map(|&p| g.apply(p)).collect();
                    t.sort_unstable();
                    colex_rank(&t)
                })
                .collect();
            Permutation::from_images(images)
        })
        .collect::<Result<Vec<_>>>()?;
    GeneratorSet::new(sets.len(), gens)
}

/// `inner ≀ S_d` in its imprimitive action.
pub fn wreath_imprimitive(inner: &GeneratorSet, d: usize) -> Result<GeneratorSet> {
    let d = positive(d, "d")?;
    let m = inner.degree();
    let n = m * d;
    let mut gens = Vec::new();
    for g in inner.generators() {
        let images = (0..n).map(|p| if p < m { g.apply(p) } else { p }).collect();
        gens.push(Permutation::from_images(images)?);
    }
    if d >= 2 {
        let cycle = (0..n).map(|p| ((p / m + 1) % d) * m + p % m).collect();
        gens.push(Permutation::from_images(cycle)?);
    }
    if d >= 3 {
        let swap = (0..n)
            .map(|p| match p / m {
                0 => m + p,
                1 => p - m,
                _ => p,
            })
            .collect();
        gens.push(Permutation::from_images(swap)?);
    }
    GeneratorSet::new(n, gens)
}

fn product_action(m: usize, d: usize) -> Result<GeneratorSet> {
    if m < 2 {
        return Err(Error::arg("product action needs m >= 2"));
    }
    let d = positive(d, "d")?;
    let n = m
        .checked_pow(d as u32)
        .ok_or_else(|| Error::arg("degree overflow"))?;
    let digits = |mut p: usize| -> Vec<usize> {
        (0..d)
            .map(|_| {
                let x = p % m;
                p /= m;
                x
            })
            .collect()
    };
    let encode = |ds: &[usize]| ds.iter().rev().fold(0, |acc, &x| acc * m + x);
    let mut gens = Vec::new();
    for g in symmetric_gens(m) {
        let images = (0..n)
            .map(|p| {
                let mut ds = digits(p);
                ds[0] = g.apply(ds[0]);
                encode(&ds)
            })
            .collect();
        gens.push(Permutation::from_images(images)?);
    }
    if d >= 2 {
        let rotate = (0..n)
            .map(|p| {
                let mut ds = digits(p);
                ds.rotate_right(1);
                encode(&ds)
            })
            .collect();
        gens.push(Permutation::from_images(rotate)?);
    }
    if d >= 3 {
        let swap = (0..n)
            .map(|p| {
                let mut ds = digits(p);
                ds.swap(0, 1);
                encode(&ds)
            })
            .collect();
        gens.push(Permutation::from_images(swap)?);
    }
    GeneratorSet::new(n, gens)
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic({n})"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral({n})"),
            GroupSpec::Symmetric(m) => write!(f, "symmetric({m})"),
            GroupSpec::Alternating(m) => write!(f, "alternating({m})"),
            GroupSpec::Subsets { m, k } => write!(f, "subsets({m},{k})"),
            GroupSpec::WreathImprimitive { inner, d } => write!(f, "wreath({inner},{d})"),
            GroupSpec::ProductAction { m, d } => write!(f, "product({m},{d})"),
            GroupSpec::M24 => f.write_str("m24"),
            GroupSpec::FromFile(p) => write!(f, "file({})", p.display()),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = SpecParser {
            s: s.trim(),
            pos: 0,
        };
        let spec = p.spec()?;
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(spec)
    }
}

struct SpecParser<'a> {
    s: &'a str,
    pos: usize,
}

impl SpecParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            line: 1,
            column: self.pos + 1,
            message: format!("{msg} in group spec {:?}", self.s),
        }
    }

    fn skip_ws(&mut self) {
        while self.s[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.s[self.pos..].starts_with(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.s[self.pos..]
            .starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            self.pos += 1;
        }
        &self.s[start..self.pos]
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.s[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.s[start..self.pos].parse().map_err(|_| {
            self.pos = start;
            self.err("expected a number")
        })
    }

    fn spec(&mut self) -> Result<GroupSpec> {
        let name = self.ident().to_ascii_lowercase();
        let one = |p: &mut Self| -> Result<usize> {
            p.eat('(')?;
            let x = p.number()?;
            p.eat(')')?;
            Ok(x)
        };
        let two = |p: &mut Self| -> Result<(usize, usize)> {
            p.eat('(')?;
            let x = p.number()?;
            p.eat(',')?;
            let y = p.number()?;
            p.eat(')')?;
            Ok((x, y))
        };
        Ok(match name.as_str() {
            "cyclic" => GroupSpec::Cyclic(one(self)?),
            "dihedral" => GroupSpec::Dihedral(one(self)?),
            "symmetric" => GroupSpec::Symmetric(one(self)?),
            "alternating" => GroupSpec::Alternating(one(self)?),
            "subsets" => {
                let (m, k) = two(self)?;
                GroupSpec::Subsets { m, k }
            }
            "product" => {
                let (m, d) = two(self)?;
                GroupSpec::ProductAction { m, d }
            }
            "wreath" => {
                self.eat('(')?;
                let inner = self.spec()?;
                self.eat(',')?;
                let d = self.number()?;
                self.eat(')')?;
                GroupSpec::wreath(inner, d)
            }
            "m24" => GroupSpec::M24,
            "file" => {
                self.eat('(')?;
                let rest = &self.s[self.pos..];
                let close = rest.rfind(')').ok_or_else(|| self.err("expected ')'"))?;
                let path = rest[..close].trim().to_string();
                self.pos += close + 1;
                GroupSpec::FromFile(PathBuf::from(path))
            }
            _ => return Err(self.err(&format!("unknown family {name:?}"))),
        })
    }
}
