//! Exact angle algebra.
//!
//! Every angle label in a diagram is a linear form `p*a + q*b + r*c + s*tau`
//! with rational coefficients. The parameters are tied together by the
//! constraint `a + b + c = tau/(2n)` for a sector count `n`; forms are compared
//! either coefficient-wise or modulo that constraint.

use std::cmp::Ordering;
use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Relative tolerance on `a + b + c = tau/(2n)` accepted by [`Assignment::check`].
pub const CONSTRAINT_TOLERANCE: f64 = 1e-12;

pub fn rational(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

fn int(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

/// `p*a + q*b + r*c + s*tau`, exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AngleForm {
    pub coeff_a: BigRational,
    pub coeff_b: BigRational,
    pub coeff_c: BigRational,
    pub coeff_tau: BigRational,
}

impl AngleForm {
    pub fn new(
        coeff_a: BigRational,
        coeff_b: BigRational,
        coeff_c: BigRational,
        coeff_tau: BigRational,
    ) -> Self {
        AngleForm {
            coeff_a,
            coeff_b,
            coeff_c,
            coeff_tau,
        }
    }

    pub fn zero() -> Self {
        Self::new(
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        )
    }

    pub fn a() -> Self {
        Self::from_ints(1, 0, 0)
    }

    pub fn b() -> Self {
        Self::from_ints(0, 1, 0)
    }

    pub fn c() -> Self {
        Self::from_ints(0, 0, 1)
    }

    /// Integer multiples of `a`, `b`, `c`.
    pub fn from_ints(a: i64, b: i64, c: i64) -> Self {
        Self::new(int(a), int(b), int(c), BigRational::zero())
    }

    /// The constant `numer/denom * tau`.
    pub fn turns(numer: i64, denom: i64) -> Self {
        Self::new(
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            rational(numer, denom),
        )
    }

    pub fn half_turn() -> Self {
        Self::turns(1, 2)
    }

    pub fn full_turn() -> Self {
        Self::turns(1, 1)
    }

    /// `x' = x + tau/(2n)`.
    pub fn prime(&self, n: u32) -> Self {
        self.primes(n, 1)
    }

    /// `count` primes at once.
    pub fn primes(&self, n: u32, count: i64) -> Self {
        self + &Self::turns(count, 2 * i64::from(n.max(1)))
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(
            &self.coeff_a * factor,
            &self.coeff_b * factor,
            &self.coeff_c * factor,
            &self.coeff_tau * factor,
        )
    }

    pub fn scale_int(&self, factor: i64) -> Self {
        self.scale(&int(factor))
    }

    pub fn is_zero(&self) -> bool {
        self.coeff_a.is_zero()
            && self.coeff_b.is_zero()
            && self.coeff_c.is_zero()
            && self.coeff_tau.is_zero()
    }

    /// True when the form has no `a`, `b`, `c` terms.
    pub fn is_constant(&self) -> bool {
        self.coeff_a.is_zero() && self.coeff_b.is_zero() && self.coeff_c.is_zero()
    }

    /// Canonical representative modulo `a + b + c = tau/(2n)`: `c` is
    /// eliminated via `c = tau/(2n) - a - b`.
    pub fn reduce(&self, n: u32) -> Self {
        let unit = rational(1, 2 * i64::from(n.max(1)));
        Self::new(
            &self.coeff_a - &self.coeff_c,
            &self.coeff_b - &self.coeff_c,
            BigRational::zero(),
            &self.coeff_tau + &self.coeff_c * unit,
        )
    }

    /// Equality modulo the constraint.
    pub fn equivalent(&self, other: &Self, n: u32) -> bool {
        (self - other).reduce(n).is_zero()
    }

    /// Cyclic relabeling `a -> b -> c -> a`.
    pub fn rotate_symbols(&self) -> Self {
        Self::new(
            self.coeff_c.clone(),
            self.coeff_a.clone(),
            self.coeff_b.clone(),
            self.coeff_tau.clone(),
        )
    }

    /// Numeric value without checking the assignment.
    pub fn value(&self, assignment: &Assignment) -> f64 {
        let f = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
        f(&self.coeff_a) * assignment.a
            + f(&self.coeff_b) * assignment.b
            + f(&self.coeff_c) * assignment.c
            + f(&self.coeff_tau) * TAU
    }

    /// Evaluates the form at an assignment that must satisfy the constraint for `n`.
    pub fn eval(&self, assignment: &Assignment, n: u32) -> Result<f64> {
        assignment.check(n)?;
        Ok(self.value(assignment))
    }
}

impl Default for AngleForm {
    fn default() -> Self {
        Self::zero()
    }
}

pub fn make_form(
    coeff_a: BigRational,
    coeff_b: BigRational,
    coeff_c: BigRational,
    coeff_tau: BigRational,
) -> AngleForm {
    AngleForm::new(coeff_a, coeff_b, coeff_c, coeff_tau)
}

pub fn prime(form: &AngleForm, n: u32) -> AngleForm {
    form.prime(n)
}

pub fn eval_form(form: &AngleForm, assignment: &Assignment, n: u32) -> Result<f64> {
    form.eval(assignment, n)
}

impl Add for &AngleForm {
    type Output = AngleForm;
    fn add(self, rhs: &AngleForm) -> AngleForm {
        AngleForm::new(
            &self.coeff_a + &rhs.coeff_a,
            &self.coeff_b + &rhs.coeff_b,
            &self.coeff_c + &rhs.coeff_c,
            &self.coeff_tau + &rhs.coeff_tau,
        )
    }
}

impl Sub for &AngleForm {
    type Output = AngleForm;
    fn sub(self, rhs: &AngleForm) -> AngleForm {
        AngleForm::new(
            &self.coeff_a - &rhs.coeff_a,
            &self.coeff_b - &rhs.coeff_b,
            &self.coeff_c - &rhs.coeff_c,
            &self.coeff_tau - &rhs.coeff_tau,
        )
    }
}

impl Neg for &AngleForm {
    type Output = AngleForm;
    fn neg(self) -> AngleForm {
        AngleForm::new(
            -&self.coeff_a,
            -&self.coeff_b,
            -&self.coeff_c,
            -&self.coeff_tau,
        )
    }
}

impl Mul<&BigRational> for &AngleForm {
    type Output = AngleForm;
    fn mul(self, rhs: &BigRational) -> AngleForm {
        self.scale(rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for AngleForm {
            type Output = AngleForm;
            fn $method(self, rhs: AngleForm) -> AngleForm {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&AngleForm> for AngleForm {
            type Output = AngleForm;
            fn $method(self, rhs: &AngleForm) -> AngleForm {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);

impl Neg for AngleForm {
    type Output = AngleForm;
    fn neg(self) -> AngleForm {
        -&self
    }
}

impl std::iter::Sum for AngleForm {
    fn sum<I: Iterator<Item = AngleForm>>(iter: I) -> Self {
        iter.fold(AngleForm::zero(), |acc, f| acc + f)
    }
}

impl<'a> std::iter::Sum<&'a AngleForm> for AngleForm {
    fn sum<I: Iterator<Item = &'a AngleForm>>(iter: I) -> Self {
        iter.fold(AngleForm::zero(), |acc, f| acc + f)
    }
}

fn write_rational(out: &mut String, q: &BigRational) {
    if q.is_integer() {
        out.push_str(&q.numer().to_string());
    } else {
        out.push_str(&format!("{}/{}", q.numer(), q.denom()));
    }
}

impl fmt::Display for AngleForm {
    /// `p*a + q*b + r*c + s*tau`, omitting zero terms and unit coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let terms = [
            (&self.coeff_a, "a"),
            (&self.coeff_b, "b"),
            (&self.coeff_c, "c"),
            (&self.coeff_tau, "tau"),
        ];
        for (coeff, symbol) in terms {
            if coeff.is_zero() {
                continue;
            }
            let magnitude = coeff.abs();
            if out.is_empty() {
                if coeff.is_negative() {
                    out.push('-');
                }
            } else if coeff.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if !magnitude.is_one() {
                write_rational(&mut out, &magnitude);
                out.push('*');
            }
            out.push_str(symbol);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

fn parse_rational(text: &str, input: &str) -> Result<BigRational> {
    let text = text.trim();
    let parse_int = |s: &str| {
        s.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::parse(input, format!("bad number {s:?}")))
    };
    match text.split_once('/') {
        Some((numer, denom)) => {
            let denom = parse_int(denom)?;
            if denom.is_zero() {
                return Err(Error::parse(input, "zero denominator"));
            }
            Ok(BigRational::new(parse_int(numer)?, denom))
        }
        None => Ok(BigRational::from_integer(parse_int(text)?)),
    }
}

impl FromStr for AngleForm {
    type Err = Error;

    /// Accepts `3/4*a - b + 1/8*tau`, `tau/8`, `2a`, `τ`, in any term order.
    fn from_str(input: &str) -> Result<Self> {
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let compact = compact.replace('τ', "tau");
        if compact.is_empty() {
            return Err(Error::parse(input, "empty form"));
        }
        let mut form = AngleForm::zero();
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !current.is_empty() {
                terms.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            } else if ch == '+' || ch == '-' {
                if !current.is_empty() {
                    return Err(Error::parse(input, "misplaced sign"));
                }
                negative ^= ch == '-';
            } else {
                current.push(ch);
            }
        }
        if current.is_empty() {
            return Err(Error::parse(input, "dangling sign"));
        }
        terms.push((negative, current));

        for (negative, term) in terms {
            let (symbol, coeff) = split_term(&term, input)?;
            let coeff = if negative { -coeff } else { coeff };
            let slot = match symbol {
                Some("a") => &mut form.coeff_a,
                Some("b") => &mut form.coeff_b,
                Some("c") => &mut form.coeff_c,
                Some("tau") => &mut form.coeff_tau,
                None if coeff.is_zero() => continue,
                _ => return Err(Error::parse(input, format!("unknown term {term:?}"))),
            };
            *slot += coeff;
        }
        Ok(form)
    }
}

/// Splits `3/4*a`, `3/4a`, `a/4`, `a` into symbol and coefficient.
fn split_term<'t>(term: &'t str, input: &str) -> Result<(Option<&'t str>, BigRational)> {
    for symbol in ["tau", "a", "b", "c"] {
        if let Some(prefix) = term.strip_suffix(symbol) {
            let prefix = prefix.strip_suffix('*').unwrap_or(prefix);
            let coeff = if prefix.is_empty() {
                BigRational::one()
            } else {
                parse_rational(prefix, input)?
            };
            return Ok((Some(symbol), coeff));
        }
        if let Some(rest) = term.strip_prefix(symbol) {
            if let Some(denom) = rest.strip_prefix('/') {
                let denom = parse_rational(denom, input)?;
                if denom.is_zero() {
                    return Err(Error::parse(input, "zero denominator"));
                }
                return Ok((Some(symbol), denom.recip()));
            }
        }
    }
    let value = parse_rational(term, input)?;
    Ok((None, value))
}

impl Serialize for AngleForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for AngleForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Similarity class of triangles with the given angles in counter-clockwise order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Shape {
    pub angles: [AngleForm; 3],
}

impl Shape {
    pub fn new(first: AngleForm, second: AngleForm, third: AngleForm) -> Self {
        Shape {
            angles: [first, second, third],
        }
    }

    pub fn angle(&self, index: usize) -> &AngleForm {
        &self.angles[index % 3]
    }

    pub fn sum(&self) -> AngleForm {
        self.angles.iter().sum()
    }

    /// True iff the angles sum to exactly `tau/2` modulo the constraint.
    pub fn sums_to_half_turn(&self, n: u32) -> bool {
        self.sum().equivalent(&AngleForm::half_turn(), n)
    }

    /// Same class listed from vertex `start`.
    pub fn rotated(&self, start: usize) -> Self {
        Shape::new(
            self.angle(start).clone(),
            self.angle(start + 1).clone(),
            self.angle(start + 2).clone(),
        )
    }

    pub fn rotate_symbols(&self) -> Self {
        Shape::new(
            self.angles[0].rotate_symbols(),
            self.angles[1].rotate_symbols(),
            self.angles[2].rotate_symbols(),
        )
    }

    /// Equality as similarity classes (cyclic rotations allowed) modulo the constraint.
    pub fn same_class(&self, other: &Shape, n: u32) -> bool {
        (0..3).any(|start| {
            let r = other.rotated(start);
            (0..3).all(|i| self.angles[i].equivalent(&r.angles[i], n))
        })
    }

    pub fn values(&self, assignment: &Assignment) -> [f64; 3] {
        [
            self.angles[0].value(assignment),
            self.angles[1].value(assignment),
            self.angles[2].value(assignment),
        ]
    }

    /// Reduced angles, used as a key for "same shape" grouping.
    pub fn canonical_key(&self, n: u32) -> String {
        let reduced: Vec<String> = self.angles.iter().map(|f| f.reduce(n).to_string()).collect();
        let rotations = [0, 1, 2].map(|s| {
            [
                reduced[s].clone(),
                reduced[(s + 1) % 3].clone(),
                reduced[(s + 2) % 3].clone(),
            ]
            .join(", ")
        });
        rotations.into_iter().min().unwrap_or_default()
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Δ({}, {}, {})",
            self.angles[0], self.angles[1], self.angles[2]
        )
    }
}

pub fn shape_sum_check(shape: &Shape, n: u32) -> bool {
    shape.sums_to_half_turn(n)
}

/// Numeric values of the parameters, in radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// `tau/(2n)`, the value of `a + b + c`.
pub fn sector_unit(n: u32) -> f64 {
    TAU / (2.0 * f64::from(n))
}

impl Assignment {
    /// Validated constructor.
    pub fn new(a: f64, b: f64, c: f64, n: u32) -> Result<Self> {
        let assignment = Assignment { a, b, c };
        assignment.check(n)?;
        Ok(assignment)
    }

    /// `c` is completed from the constraint.
    pub fn from_ab(a: f64, b: f64, n: u32) -> Result<Self> {
        Self::new(a, b, sector_unit(n) - a - b, n)
    }

    /// `a`, `b`, `c` proportional to the given weights.
    pub fn proportional(weights: [f64; 3], n: u32) -> Result<Self> {
        if !weights.iter().all(|w| w.is_finite() && *w > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "weights {weights:?} must be positive"
            )));
        }
        let total: f64 = weights.iter().sum();
        let unit = sector_unit(n);
        let a = unit * weights[0] / total;
        let b = unit * weights[1] / total;
        Self::from_ab(a, b, n)
    }

    pub fn equilateral(n: u32) -> Self {
        let third = sector_unit(n) / 3.0;
        Assignment {
            a: third,
            b: third,
            c: third,
        }
    }

    /// Uniform draw from `{a, b, c > tau/(40n), a + b + c = tau/(2n)}`.
    pub fn random<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Self {
        let unit = sector_unit(n);
        let floor = unit / 20.0;
        let free = unit - 3.0 * floor;
        let mut cuts = [rng.gen::<f64>(), rng.gen::<f64>()];
        cuts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
        let a = floor + free * cuts[0];
        let b = floor + free * (cuts[1] - cuts[0]);
        Assignment {
            a,
            b,
            c: unit - a - b,
        }
    }

    pub fn check(&self, n: u32) -> Result<()> {
        let target = sector_unit(n);
        let sum = self.a + self.b + self.c;
        let finite = self.a.is_finite() && self.b.is_finite() && self.c.is_finite();
        if n == 0
            || !finite
            || self.a <= 0.0
            || self.b <= 0.0
            || self.c <= 0.0
            || (sum - target).abs() > CONSTRAINT_TOLERANCE * target
        {
            return Err(Error::ConstraintViolation {
                a: self.a,
                b: self.b,
                c: self.c,
                denominator: 2 * u64::from(n),
            });
        }
        Ok(())
    }
}

/// Parses an angle in radians from `30deg`, `0.5rad`, `1/12tau`, `tau/8`
/// or a bare number (radians). Rational coefficients are reduced exactly
/// before the single multiplication by the unit.
pub fn parse_angle(input: &str) -> Result<f64> {
    let text: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    let text = text.replace('τ', "tau");
    let (body, unit) = if let Some(body) = text.strip_suffix("deg") {
        (body.to_string(), TAU / 360.0)
    } else if let Some(body) = text.strip_suffix("rad") {
        (body.to_string(), 1.0)
    } else if let Some(body) = text.strip_suffix("tau") {
        (body.trim_end_matches('*').to_string(), TAU)
    } else if let Some((head, denom)) = text.split_once("tau/") {
        (format!("{}/{denom}", if head.is_empty() { "1" } else { head.trim_end_matches('*') }), TAU)
    } else {
        (text.clone(), 1.0)
    };
    if text.is_empty() {
        return Err(Error::parse(input, "empty angle"));
    }
    let coefficient = match body.as_str() {
        "" => 1.0,
        "-" => -1.0,
        b if b.contains('/') => parse_rational(b, input)?
            .to_f64()
            .ok_or_else(|| Error::parse(input, "coefficient out of range"))?,
        b => b
            .parse::<f64>()
            .map_err(|_| Error::parse(input, "expected a number with suffix deg, rad or tau"))?,
    };
    let value = coefficient * unit;
    if !value.is_finite() {
        return Err(Error::parse(input, "angle is not finite"));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn form(text: &str) -> AngleForm {
        text.parse().unwrap()
    }

    #[test]
    fn angle_suffixes() {
        assert_eq!(parse_angle("1/12tau").unwrap(), TAU / 12.0);
        assert_eq!(parse_angle("tau/8").unwrap(), TAU / 8.0);
        assert_eq!(parse_angle("τ").unwrap(), TAU);
        assert_eq!(parse_angle("0.25 tau").unwrap(), TAU / 4.0);
        assert!((parse_angle("30deg").unwrap() - TAU / 12.0).abs() < 1e-16);
        assert_eq!(parse_angle("0.5rad").unwrap(), 0.5);
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert!(parse_angle("abc").is_err());
        assert!(parse_angle("1/0tau").is_err());
        assert!(parse_angle("").is_err());
    }

    #[test]
    fn basis_and_prime_examples() {
        let a = make_form(int(1), int(0), int(0), int(0));
        assert_eq!(a, AngleForm::a());
        assert_eq!(a.to_string(), "a");

        let c_prime = make_form(int(0), int(0), int(1), rational(1, 4));
        assert_eq!(c_prime, AngleForm::c().prime(2));
        assert_eq!(prime(&AngleForm::a(), 2), form("a + tau/4"));
        assert_eq!(prime(&AngleForm::a(), 3), form("a + 1/6*tau"));
    }

    #[test]
    fn sum_of_parameters_matches_constraint_constant() {
        let sum = AngleForm::from_ints(1, 1, 1);
        for n in 1..10 {
            let unit = AngleForm::turns(1, 2 * i64::from(n));
            assert!(sum.equivalent(&unit, n));
            assert_ne!(sum, unit);
        }
    }

    #[test]
    fn four_primes_of_zero_is_a_full_turn() {
        let mut x = AngleForm::zero();
        for _ in 0..4 {
            x = x.prime(2);
        }
        assert_eq!(x, AngleForm::full_turn());
        for n in 1..=12 {
            let mut x = AngleForm::zero();
            for _ in 0..2 * n {
                x = x.prime(n);
            }
            assert_eq!(x, AngleForm::full_turn());
        }
    }

    #[test]
    fn evaluation() {
        let n = 2;
        let third = TAU / 12.0;
        let eq = Assignment::new(third, third, third, n).unwrap();
        let v = eval_form(&form("c + tau/4"), &eq, n).unwrap();
        assert!((v - TAU / 3.0).abs() < 1e-15);

        let skew = Assignment::from_ab(TAU / 16.0, TAU / 16.0, n).unwrap();
        let v = eval_form(&form("2a"), &skew, n).unwrap();
        assert!((v - TAU / 8.0).abs() < 1e-15);

        let bad = Assignment {
            a: 0.1,
            b: 0.1,
            c: 0.1,
        };
        assert!(matches!(
            eval_form(&AngleForm::a(), &bad, n),
            Err(Error::ConstraintViolation { .. })
        ));
        let negative = Assignment {
            a: -0.1,
            b: TAU / 8.0,
            c: TAU / 8.0 + 0.1,
        };
        assert!(negative.check(n).is_err());
    }

    #[test]
    fn shape_sum_examples() {
        let a = AngleForm::a();
        let b = AngleForm::b();
        let c = AngleForm::c();
        assert!(shape_sum_check(&Shape::new(a.clone(), b.clone(), c.prime(2)), 2));
        assert!(!shape_sum_check(&Shape::new(a.clone(), b.clone(), c.clone()), 2));
        assert!(shape_sum_check(
            &Shape::new(a.scale_int(3), b.scale_int(3), c.scale_int(3)),
            3
        ));
    }

    #[test]
    fn parser_accepts_variants() {
        let expected = AngleForm::new(rational(3, 4), int(-1), int(0), rational(1, 8));
        for text in [
            "3/4*a - b + 1/8*tau",
            "1/8*tau + 3/4a - 1*b",
            "-b+3/4*a+tau/8",
            "  3/4 * a -b + 1/8 τ ",
            "3/4*a - b + 0*c + 1/8*tau",
        ] {
            assert_eq!(form(text), expected, "{text}");
        }
        assert_eq!(form("0"), AngleForm::zero());
        assert_eq!(form("a + a"), AngleForm::from_ints(2, 0, 0));
        assert!("x".parse::<AngleForm>().is_err());
        assert!("a +".parse::<AngleForm>().is_err());
        assert!("1/0*a".parse::<AngleForm>().is_err());
        assert!("".parse::<AngleForm>().is_err());
    }

    #[test]
    fn display_is_compact() {
        assert_eq!(form("-a + 2*c - 1/6*tau").to_string(), "-a + 2*c - 1/6*tau");
        assert_eq!(AngleForm::zero().to_string(), "0");
        assert_eq!(AngleForm::full_turn().to_string(), "tau");
    }

    #[test]
    fn same_class_allows_rotation_and_constraint() {
        let n = 3;
        let s = Shape::new(AngleForm::a(), AngleForm::b(), AngleForm::c().primes(n, 2));
        let t = Shape::new(
            AngleForm::c().primes(n, 2),
            AngleForm::a(),
            AngleForm::turns(1, 6) - AngleForm::a() - AngleForm::c(),
        );
        assert!(s.same_class(&t, n));
        assert_eq!(s.canonical_key(n), t.canonical_key(n));
        let reflected = Shape::new(AngleForm::b(), AngleForm::a(), AngleForm::c().primes(n, 2));
        assert!(!s.same_class(&reflected, n));
    }

    #[test]
    fn random_assignments_are_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 1..20 {
            for _ in 0..50 {
                let x = Assignment::random(n, &mut rng);
                x.check(n).unwrap();
                let floor = sector_unit(n) / 20.0;
                assert!(x.a >= floor && x.b >= floor && x.c >= floor * (1.0 - 1e-12));
            }
        }
    }

    fn small_form() -> impl Strategy<Value = AngleForm> {
        let q = || (-20i64..20, 1i64..12).prop_map(|(p, d)| rational(p, d));
        (q(), q(), q(), q()).prop_map(|(a, b, c, t)| AngleForm::new(a, b, c, t))
    }

    proptest! {
        #[test]
        fn add_then_subtract_is_identity(f in small_form(), g in small_form()) {
            prop_assert_eq!((&f + &g) - &g, f);
        }

        #[test]
        fn display_parse_round_trip(f in small_form()) {
            prop_assert_eq!(f.to_string().parse::<AngleForm>().unwrap(), f);
        }

        #[test]
        fn equivalence_is_multiple_of_constraint(f in small_form(), k in -10i64..10, d in 1i64..7, n in 1u32..9) {
            let constraint = AngleForm::from_ints(1, 1, 1) - AngleForm::turns(1, 2 * i64::from(n));
            let g = &f + &constraint.scale(&rational(k, d));
            prop_assert!(f.equivalent(&g, n));
            prop_assert!(g.equivalent(&f, n));
            prop_assert_eq!(f.reduce(n), g.reduce(n));
            let h = &g + &AngleForm::turns(1, 97);
            prop_assert!(!f.equivalent(&h, n));
        }

        #[test]
        fn accepted_shapes_evaluate_to_half_turn(
            p in -3i64..4, q in -3i64..4, n in 1u32..8, seed in 0u64..1000
        ) {
            use rand::SeedableRng;
            let first = AngleForm::from_ints(p, q, 0).prime(n);
            let second = AngleForm::from_ints(1 - p, 0, 2);
            let third = AngleForm::half_turn() - first.clone() - second.clone();
            let shape = Shape::new(first, second, third);
            prop_assert!(shape_sum_check(&shape, n));
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let x = Assignment::random(n, &mut rng);
            let total: f64 = shape.values(&x).iter().sum();
            prop_assert!((total - TAU / 2.0).abs() < 1e-12);
        }
    }
}
