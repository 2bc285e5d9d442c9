use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::field::{lie_bracket, VectorField};
use super::frame::{tangential_frame, Frame};
use crate::error::{Error, Result};
use crate::point::C2;
use crate::symalg::{ConjPoly, NumPoly, NumRational, RationalExpr};

/// Default depth of the commutator table.
pub const DEFAULT_K_MAX: usize = 8;
/// Hard cap on the table depth.
pub const MAX_K: usize = 12;
/// `|rho(p)|` below which `p` counts as a boundary point.
pub const ON_BOUNDARY_TOL: f64 = 1e-10;
pub const DEFAULT_TYPE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    L,
    Lb,
}

impl Letter {
    pub fn as_str(self) -> &'static str {
        match self {
            Letter::L => "L",
            Letter::Lb => "Lb",
        }
    }
}

/// `[W_k, [W_{k-1}, ... [W_2, W_1]...]]`, stored outermost letter first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// The word with its outermost letter removed.
    pub fn inner(&self) -> Option<Word> {
        (self.0.len() > 1).then(|| Word(self.0[1..].to_vec()))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.0.len();
        if n == 0 {
            return Ok(());
        }
        // [a,[b,[c,d]]]: n-1 opening brackets, innermost pair shares one.
        for l in &self.0[..n - 1] {
            write!(f, "[{},", l.as_str())?;
        }
        write!(f, "{}", self.0[n - 1].as_str())?;
        for _ in 0..n - 1 {
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word> {
        let letters = s
            .split(['[', ']', ','])
            .filter(|t| !t.is_empty())
            .map(|t| match t.trim() {
                "L" => Ok(Letter::L),
                "Lb" => Ok(Letter::Lb),
                other => Err(Error::Parse(format!("unknown letter {other:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::Parse("empty word".into()));
        }
        Ok(Word(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which computation produced an entry's `lambda`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaRoute {
    Seed,
    Explicit,
    Bracket,
}

/// An iterated commutator with its decomposition `f1 L + f2 Lb + lambda T`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommutatorEntry {
    pub word: Word,
    pub degree: usize,
    pub f1: RationalExpr,
    pub f2: RationalExpr,
    pub lambda: RationalExpr,
    pub route: LambdaRoute,
    pub field: VectorField,
}

/// All surviving bracket words up to `k_max`, after removing zero brackets,
/// exact duplicates and exact negations.
#[derive(Clone)]
pub struct CommutatorTable {
    frame: Frame,
    k_max: usize,
    entries: Vec<CommutatorEntry>,
    lambda_num: Vec<NumRational>,
    rho_num: NumPoly,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    rho: ConjPoly,
    k_max: usize,
    dedup: String,
    entries: Vec<CommutatorEntry>,
}

const DEDUP_POLICY: &str = "drop-zero-duplicate-negation";

/// Boundary type report at one point.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TypeReport {
    pub point: C2,
    pub tau_z: usize,
    /// `Lambda_2 .. Lambda_{tau_z}`.
    pub lambda_values: Vec<f64>,
    pub tolerance: f64,
}

impl CommutatorTable {
    pub fn build(rho: &ConjPoly, k_max: usize) -> Result<CommutatorTable> {
        build_table(tangential_frame(rho)?, k_max)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn entries(&self) -> &[CommutatorEntry] {
        &self.entries
    }

    pub fn dedup_policy(&self) -> &'static str {
        DEDUP_POLICY
    }

    pub fn find(&self, word: &Word) -> Option<&CommutatorEntry> {
        self.entries.iter().find(|e| &e.word == word)
    }

    fn check_boundary(&self, point: C2) -> Result<()> {
        let r = self.rho_num.eval(point).norm();
        if !(r < ON_BOUNDARY_TOL) {
            return Err(Error::InvalidArgument(format!(
                "point {point} is not on the boundary (|rho| = {r:.3e})"
            )));
        }
        Ok(())
    }

    /// `[Lambda_1, Lambda_2, ..., Lambda_{k_max}]` at a boundary point.
    pub fn lambda_profile(&self, point: C2) -> Result<Vec<f64>> {
        self.check_boundary(point)?;
        self.lambda_profile_unchecked(point)
    }

    pub(crate) fn lambda_profile_unchecked(&self, point: C2) -> Result<Vec<f64>> {
        self.lambda_profile_to(point, self.k_max)
    }

    /// `[Lambda_1, ..., Lambda_k]` without the boundary check. Only entries
    /// of degree at most `k` are evaluated.
    pub fn lambda_profile_to(&self, point: C2, k: usize) -> Result<Vec<f64>> {
        let k = k.min(self.k_max);
        let mut sums = vec![0.0; k + 1];
        // entries are stored in nondecreasing degree
        for (e, l) in self.entries.iter().zip(&self.lambda_num) {
            if e.degree > k {
                break;
            }
            sums[e.degree] += l.eval(point)?.norm_sqr();
        }
        let mut acc = 0.0;
        Ok((1..=k)
            .map(|k| {
                acc += sums[k];
                acc.sqrt()
            })
            .collect())
    }

    /// `Lambda_k(point)`: root of the sum of `|lambda|^2` over entries of
    /// degree at most `k`.
    pub fn capital_lambda(&self, k: usize, point: C2) -> Result<f64> {
        if k == 0 || k > self.k_max {
            return Err(Error::InvalidArgument(format!("k = {k} outside 1..={}", self.k_max)));
        }
        Ok(self.lambda_profile(point)?[k - 1])
    }

    /// Smallest `k` in `[2, k_max]` with `Lambda_k(point) > tol`.
    pub fn point_type(&self, point: C2, tol: f64) -> Result<TypeReport> {
        let profile = self.lambda_profile(point)?;
        let tau = (2..=self.k_max)
            .find(|&k| profile[k - 1] > tol)
            .ok_or(Error::TypeExceedsKmax {
                point,
                k_max: self.k_max,
            })?;
        Ok(TypeReport {
            point,
            tau_z: tau,
            lambda_values: profile[1..tau].to_vec(),
            tolerance: tol,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let t = TableJson {
            rho: self.frame.derivs.rho.clone(),
            k_max: self.k_max,
            dedup: DEDUP_POLICY.into(),
            entries: self.entries.clone(),
        };
        Ok(serde_json::to_string(&t)?)
    }

    pub fn from_json(s: &str) -> Result<CommutatorTable> {
        let t: TableJson = serde_json::from_str(s)?;
        if t.dedup != DEDUP_POLICY {
            return Err(Error::Parse(format!("unknown dedup policy {:?}", t.dedup)));
        }
        let frame = tangential_frame(&t.rho)?;
        Ok(Self::assemble(frame, t.k_max, t.entries))
    }

    fn assemble(frame: Frame, k_max: usize, entries: Vec<CommutatorEntry>) -> CommutatorTable {
        let lambda_num = entries.iter().map(|e| e.lambda.numeric()).collect();
        let rho_num = frame.derivs.rho.numeric();
        CommutatorTable {
            frame,
            k_max,
            entries,
            lambda_num,
            rho_num,
        }
    }
}

/// Enumerates bracket words up to `k_max`. `[L, .]` extensions take their
/// `lambda` from the explicit recursion; `[Lb, .]` extensions from the
/// symbolic bracket and frame decomposition.
pub fn build_table(frame: Frame, k_max: usize) -> Result<CommutatorTable> {
    if !(2..=MAX_K).contains(&k_max) {
        return Err(Error::InvalidArgument(format!("k_max = {k_max} outside 2..={MAX_K}")));
    }
    let seed = |letter: Letter, field: &VectorField, f1: RationalExpr, f2: RationalExpr| CommutatorEntry {
        word: Word(vec![letter]),
        degree: 1,
        f1,
        f2,
        lambda: RationalExpr::zero(),
        route: LambdaRoute::Seed,
        field: field.clone(),
    };
    let mut entries = vec![
        seed(Letter::L, &frame.l, RationalExpr::one(), RationalExpr::zero()),
        seed(Letter::Lb, &frame.lb, RationalExpr::zero(), RationalExpr::one()),
    ];
    let mut frontier = vec![0usize, 1];
    for _ in 2..=k_max {
        let mut next = Vec::new();
        for letter in [Letter::L, Letter::Lb] {
            for &idx in &frontier {
                let outer = match letter {
                    Letter::L => &frame.l,
                    Letter::Lb => &frame.lb,
                };
                let field = lie_bracket(outer, &entries[idx].field);
                if field.is_zero() {
                    continue;
                }
                let neg = field.neg();
                if entries.iter().any(|e| e.field == field || e.field == neg) {
                    continue;
                }
                let coeffs = frame.decompose_symbolic(&field)?;
                let inner = &entries[idx];
                let (lambda, route) = match letter {
                    Letter::L => (
                        frame.lambda_step_explicit(&inner.f2, &inner.lambda)?,
                        LambdaRoute::Explicit,
                    ),
                    Letter::Lb => (coeffs.lambda, LambdaRoute::Bracket),
                };
                let mut word = vec![letter];
                word.extend_from_slice(&inner.word.0);
                next.push(entries.len());
                entries.push(CommutatorEntry {
                    degree: word.len(),
                    word: Word(word),
                    f1: coeffs.f1,
                    f2: coeffs.f2,
                    lambda,
                    route,
                    field,
                });
            }
        }
        frontier = next;
    }
    assert!(entries.len() < (1usize << (k_max + 1)), "table size exceeds 2^(k_max+1)");
    Ok(CommutatorTable::assemble(frame, k_max, entries))
}
