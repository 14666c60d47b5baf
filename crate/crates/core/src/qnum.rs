//! Quantum integers at roots of unity and at generic real q.
//!
//! `[m]_q = (q^m - q^-m)/(q - q^-1)` is evaluated through the real closed
//! forms `sin(m*pi/n)/sin(pi/n)` (for `q = exp(i*pi/n)`) and
//! `sinh(m*x)/sinh(x)` (for `q = e^x`). Contexts carry a working precision;
//! precisions above 53 bits are evaluated with `astro-float` and rounded.

use astro_float::{BigFloat, Consts, RoundingMode};
use serde::{Deserialize, Serialize};

use crate::error::{CellforgeError, Result};

/// Default working precision in bits (IEEE double).
pub const DEFAULT_PRECISION: u32 = 53;
/// Smallest precision accepted as "extended".
pub const EXTENDED_PRECISION: u32 = 113;
/// Largest precision accepted by [`QContext::with_precision`].
pub const MAX_PRECISION: u32 = 4096;
/// Environment variable read by [`precision_from_env`].
pub const PRECISION_ENV: &str = "CELLFORGE_PRECISION";

/// The deformation parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QKind {
    /// `q = exp(i*pi/n)` with Coxeter label `n >= 4`.
    RootOfUnity { n: u32 },
    /// `q = e^x` with `x > 0`.
    Generic { x: f64 },
}

/// Deformation parameter plus working precision. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QContext {
    kind: QKind,
    precision: u32,
}

impl QContext {
    /// Context for `q = exp(i*pi/n)`.
    pub fn root_of_unity(n: u32) -> Result<Self> {
        if n < 4 {
            return Err(CellforgeError::InvalidContext(format!(
                "Coxeter label must be at least 4, got {n}"
            )));
        }
        Ok(Self {
            kind: QKind::RootOfUnity { n },
            precision: DEFAULT_PRECISION,
        })
    }

    /// Context for real `q = e^x`.
    pub fn generic(x: f64) -> Result<Self> {
        if !(x.is_finite() && x > 0.0) {
            return Err(CellforgeError::InvalidContext(format!(
                "generic q needs a finite x > 0, got {x}"
            )));
        }
        Ok(Self {
            kind: QKind::Generic { x },
            precision: DEFAULT_PRECISION,
        })
    }

    /// Same deformation parameter at another working precision.
    pub fn with_precision(self, bits: u32) -> Result<Self> {
        if !(DEFAULT_PRECISION..=MAX_PRECISION).contains(&bits) {
            return Err(CellforgeError::InvalidContext(format!(
                "precision must lie in {DEFAULT_PRECISION}..={MAX_PRECISION} bits, got {bits}"
            )));
        }
        Ok(Self {
            precision: bits,
            ..self
        })
    }

    pub fn kind(&self) -> QKind {
        self.kind
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Coxeter label for root-of-unity contexts.
    pub fn coxeter_n(&self) -> Option<u32> {
        match self.kind {
            QKind::RootOfUnity { n } => Some(n),
            QKind::Generic { .. } => None,
        }
    }

    pub fn is_extended(&self) -> bool {
        self.precision > DEFAULT_PRECISION
    }

    /// `[m]_q` rounded to the nearest double. Defined for every integer by
    /// the closed form, so `[-m] = -[m]` and `[0] = 0`.
    pub fn qint(&self, m: i64) -> f64 {
        if m == 0 {
            return 0.0;
        }
        if m == 1 {
            return 1.0;
        }
        if self.is_extended() {
            return big_to_f64(&self.qint_big(m));
        }
        match self.kind {
            QKind::RootOfUnity { n } => {
                let t = std::f64::consts::PI / n as f64;
                (m as f64 * t).sin() / t.sin()
            }
            QKind::Generic { x } => (m as f64 * x).sinh() / x.sinh(),
        }
    }

    /// `[m]_q` as an arbitrary precision float at the context precision
    /// (at least 64 bits).
    pub fn qint_big(&self, m: i64) -> BigFloat {
        BigEval::new(self).qint(m)
    }

    /// The Perron-Frobenius eigenvalue `[3]_q` of the graphs with this label.
    pub fn q3(&self) -> f64 {
        self.qint(3)
    }

    /// Residual threshold policy: `1e-12` times the given magnitude scale.
    pub fn tolerance(&self, scale: f64) -> f64 {
        1e-12 * scale.max(1.0)
    }
}

/// Free-function form of [`QContext::qint`].
pub fn qint(ctx: &QContext, m: i64) -> f64 {
    ctx.qint(m)
}

/// Reads `CELLFORGE_PRECISION` (a number of bits). Unset or empty yields
/// `None`.
pub fn precision_from_env() -> Result<Option<u32>> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => {
            let bits: u32 = v.trim().parse().map_err(|_| {
                CellforgeError::InvalidContext(format!("{PRECISION_ENV}={v} is not a bit count"))
            })?;
            if !(DEFAULT_PRECISION..=MAX_PRECISION).contains(&bits) {
                return Err(CellforgeError::InvalidContext(format!(
                    "{PRECISION_ENV}={bits} is outside {DEFAULT_PRECISION}..={MAX_PRECISION}"
                )));
            }
            Ok(Some(bits))
        }
        Err(_) => Ok(None),
    }
}

fn big_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let s = format!("{x}");
    s.parse::<f64>().unwrap_or(f64::NAN)
}

/// Arbitrary precision evaluator bound to one context.
struct BigEval {
    kind: QKind,
    p: usize,
    rm: RoundingMode,
    cc: Consts,
}

impl BigEval {
    fn new(ctx: &QContext) -> Self {
        Self {
            kind: ctx.kind,
            p: ctx.precision.max(64) as usize,
            rm: RoundingMode::ToEven,
            cc: Consts::new().expect("astro-float constant cache"),
        }
    }

    fn int(&self, m: i64) -> BigFloat {
        BigFloat::from_i64(m, self.p)
    }

    fn qint(&mut self, m: i64) -> BigFloat {
        let (p, rm) = (self.p, self.rm);
        match self.kind {
            QKind::RootOfUnity { n } => {
                let t = self.cc.pi(p, rm).div(&self.int(n as i64), p, rm);
                let num = t.mul(&self.int(m), p, rm).sin(p, rm, &mut self.cc);
                let den = t.sin(p, rm, &mut self.cc);
                num.div(&den, p, rm)
            }
            QKind::Generic { x } => {
                let x = BigFloat::from_f64(x, p);
                let num = x.mul(&self.int(m), p, rm).sinh(p, rm, &mut self.cc);
                let den = x.sinh(p, rm, &mut self.cc);
                num.div(&den, p, rm)
            }
        }
    }
}

/// Arithmetic needed by the identity checks, implemented at double and at
/// extended precision.
trait Field {
    type T: Clone;
    fn q(&mut self, m: i64) -> Self::T;
    fn one(&self) -> Self::T;
    fn add(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn sub(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn mul(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn div(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn abs_f64(&self, a: &Self::T) -> f64;
}

struct Double(QContext);

impl Field for Double {
    type T = f64;
    fn q(&mut self, m: i64) -> f64 {
        self.0.qint(m)
    }
    fn one(&self) -> f64 {
        1.0
    }
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn sub(&self, a: &f64, b: &f64) -> f64 {
        a - b
    }
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn div(&self, a: &f64, b: &f64) -> f64 {
        a / b
    }
    fn abs_f64(&self, a: &f64) -> f64 {
        a.abs()
    }
}

impl Field for BigEval {
    type T = BigFloat;
    fn q(&mut self, m: i64) -> BigFloat {
        self.qint(m)
    }
    fn one(&self) -> BigFloat {
        self.int(1)
    }
    fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, self.rm)
    }
    fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, self.rm)
    }
    fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, self.rm)
    }
    fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, self.rm)
    }
    fn abs_f64(&self, a: &BigFloat) -> f64 {
        big_to_f64(a).abs()
    }
}

/// Maximum absolute violation of each identity family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub n: u32,
    pub max_m: u32,
    pub precision: u32,
    /// `[a] = [n-a]` for `0 <= a <= n`.
    pub symmetry: f64,
    /// `[a] - [a-2] = [2a-2]/[a-1]` for `2 <= a <= max_m`.
    pub difference: f64,
    /// `[a]^2 - [a-1][a+1] = 1` for `1 <= a <= max_m`.
    pub determinant: f64,
    /// `[a][a+b] - [a-1][a+b+1] = [b+1]` for `a >= 1`, `b >= 0`, `a+b <= max_m`.
    pub shifted_determinant: f64,
    /// Truncated fusion rule
    /// `[a][b] = sum [c]`, `|a-b|+1 <= c <= min(a+b-1, 2n-a-b-1)`, `c = a+b-1 mod 2`,
    /// for `1 <= a, b <= max_m`.
    pub fusion: f64,
    /// `[4]^2 - [2][10]`, reported only at `n = 24`.
    pub e24_relation: Option<f64>,
}

impl IdentityReport {
    pub fn max_violation(&self) -> f64 {
        [
            self.symmetry,
            self.difference,
            self.determinant,
            self.shifted_determinant,
            self.fusion,
            self.e24_relation.unwrap_or(0.0),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_violation() <= tol
    }
}

/// Evaluates every identity family for a root-of-unity context.
pub fn check_identities(ctx: &QContext, max_m: u32) -> Result<IdentityReport> {
    let n = ctx.coxeter_n().ok_or_else(|| {
        CellforgeError::InvalidContext("identity checks need a root-of-unity context".into())
    })?;
    if max_m + 2 > n {
        return Err(CellforgeError::InvalidContext(format!(
            "max_m = {max_m} exceeds n - 2 = {}",
            n - 2
        )));
    }
    let report = if ctx.is_extended() {
        identities(&mut BigEval::new(ctx), n, max_m)
    } else {
        identities(&mut Double(*ctx), n, max_m)
    };
    Ok(IdentityReport {
        precision: ctx.precision(),
        ..report
    })
}

fn identities<F: Field>(f: &mut F, n: u32, max_m: u32) -> IdentityReport {
    let n = n as i64;
    let top = max_m as i64;
    let table: Vec<F::T> = (-1..=2 * n + 2).map(|m| f.q(m)).collect();
    let q = |m: i64| -> &F::T { &table[(m + 1) as usize] };

    let mut symmetry: f64 = 0.0;
    for a in 0..=n {
        symmetry = symmetry.max(f.abs_f64(&f.sub(q(a), q(n - a))));
    }

    let mut difference: f64 = 0.0;
    for a in 2..=top {
        let lhs = f.sub(q(a), q(a - 2));
        let rhs = f.div(q(2 * a - 2), q(a - 1));
        difference = difference.max(f.abs_f64(&f.sub(&lhs, &rhs)));
    }

    let mut determinant: f64 = 0.0;
    let mut shifted: f64 = 0.0;
    for a in 1..=top {
        let lhs = f.sub(&f.mul(q(a), q(a)), &f.mul(q(a - 1), q(a + 1)));
        determinant = determinant.max(f.abs_f64(&f.sub(&lhs, &f.one())));
        for b in 0..=(top - a) {
            let lhs = f.sub(&f.mul(q(a), q(a + b)), &f.mul(q(a - 1), q(a + b + 1)));
            shifted = shifted.max(f.abs_f64(&f.sub(&lhs, q(b + 1))));
        }
    }

    let mut fusion: f64 = 0.0;
    for a in 1..=top {
        for b in 1..=top {
            let lhs = f.mul(q(a), q(b));
            let lo = (a - b).abs() + 1;
            let hi = (a + b - 1).min(2 * n - a - b - 1);
            let mut rhs = f.sub(&f.one(), &f.one());
            let mut c = lo;
            while c <= hi {
                rhs = f.add(&rhs, q(c));
                c += 2;
            }
            fusion = fusion.max(f.abs_f64(&f.sub(&lhs, &rhs)));
        }
    }

    let e24_relation = (n == 24).then(|| {
        let lhs = f.mul(q(4), q(4));
        let rhs = f.mul(q(2), q(10));
        f.abs_f64(&f.sub(&lhs, &rhs))
    });

    IdentityReport {
        n: n as u32,
        max_m,
        precision: DEFAULT_PRECISION,
        symmetry,
        difference,
        determinant,
        shifted_determinant: shifted,
        fusion,
        e24_relation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let c = QContext::root_of_unity(6).unwrap();
        assert_eq!(c.qint(0), 0.0);
        assert_eq!(c.qint(1), 1.0);
        assert!((c.qint(3) - 2.0).abs() < 1e-14);
        assert!(c.qint(6).abs() < 1e-14);
    }

    #[test]
    fn extended_matches_double() {
        let c = QContext::root_of_unity(24).unwrap();
        let e = c.with_precision(EXTENDED_PRECISION).unwrap();
        for m in 0..30 {
            assert!((c.qint(m) - e.qint(m)).abs() < 1e-14, "m = {m}");
        }
    }

    #[test]
    fn generic_is_positive() {
        let c = QContext::generic(0.3).unwrap();
        for m in 1..20 {
            assert!(c.qint(m) > 0.0);
        }
    }

    #[test]
    fn rejects_bad_contexts() {
        assert!(QContext::root_of_unity(3).is_err());
        assert!(QContext::generic(-1.0).is_err());
        assert!(QContext::generic(f64::NAN).is_err());
        let c = QContext::root_of_unity(8).unwrap();
        assert!(c.with_precision(20).is_err());
        assert!(check_identities(&c, 7).is_err());
        assert!(check_identities(&QContext::generic(0.1).unwrap(), 3).is_err());
    }
}
