//! Exact arithmetic in `Q` and real quadratic fields `Q(sqrt(d))`.
//!
//! A value is stored in canonical form `a + b*sqrt(d)` with `a`, `b`
//! arbitrary-precision rationals and `d` a squarefree integer radicand
//! (`d = 1` exactly when `b = 0`). Two values are equal iff their
//! canonical forms are identical, and every comparison is decided by
//! integer arithmetic alone: the sign of `a + b*sqrt(d)` follows from
//! the signs of `a` and `b` and a comparison of `a^2` against `b^2*d`.
//!
//! Values from distinct radicands never combine silently; binary
//! operations on two genuinely irrational values with different `d`
//! report [`ScalarError::MixedRadicands`].

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Largest integer accepted under a `sqrt(..)` literal.
///
/// Squarefree extraction trial-divides candidates up to 10^6, which is
/// complete for radicands up to 10^12 (a residual square factor would
/// need a prime above 10^6 and hence exceed the cap).
pub const MAX_RADICAND: u64 = 1_000_000_000_000;

/// Errors raised by scalar construction, parsing and comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarError {
    /// Two irrational operands live in different quadratic fields.
    MixedRadicands { left: u64, right: u64 },
    /// Division by an exactly-zero scalar.
    DivisionByZero,
    /// Malformed literal; `pos` is a byte offset into the input.
    Syntax { pos: usize, expected: &'static str },
    /// Radicand beyond [`MAX_RADICAND`].
    RadicandTooLarge(u64),
}

impl fmt::Display for ScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarError::MixedRadicands { left, right } => {
                write!(f, "mixed radicands: sqrt({left}) and sqrt({right})")
            }
            ScalarError::DivisionByZero => write!(f, "division by zero"),
            ScalarError::Syntax { pos, expected } => {
                write!(f, "syntax error at byte {pos}: expected {expected}")
            }
            ScalarError::RadicandTooLarge(d) => {
                write!(f, "radicand {d} exceeds the supported bound {MAX_RADICAND}")
            }
        }
    }
}

impl core::error::Error for ScalarError {}

/// An exact number `a + b*sqrt(d)` in `Q` or a real quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    a: BigRational,
    b: BigRational,
    d: u64,
}

impl ExactScalar {
    fn make(a: BigRational, b: BigRational, d: u64) -> Self {
        if b.is_zero() || d == 1 {
            // sqrt(1) folds into the rational part; b*sqrt(0) is zero.
            let a = if d == 1 { a + b } else { a };
            return ExactScalar {
                a,
                b: BigRational::zero(),
                d: 1,
            };
        }
        if d == 0 {
            return ExactScalar {
                a,
                b: BigRational::zero(),
                d: 1,
            };
        }
        debug_assert!(is_squarefree_small(d));
        ExactScalar { a, b, d }
    }

    pub fn zero() -> Self {
        Self::make(BigRational::zero(), BigRational::zero(), 1)
    }

    pub fn one() -> Self {
        Self::make(BigRational::one(), BigRational::zero(), 1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::make(BigRational::from_integer(n.into()), BigRational::zero(), 1)
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::make(BigRational::from_integer(n), BigRational::zero(), 1)
    }

    /// Exact rational `num/den`. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::make(
            BigRational::new(num.into(), den.into()),
            BigRational::zero(),
            1,
        )
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::make(r, BigRational::zero(), 1)
    }

    /// `sqrt(n)` with the square part extracted, e.g. `sqrt(12) = 2*sqrt(3)`.
    pub fn sqrt(n: u64) -> Result<Self, ScalarError> {
        if n > MAX_RADICAND {
            return Err(ScalarError::RadicandTooLarge(n));
        }
        let (square_root, free) = extract_square(n);
        Ok(Self::make(
            BigRational::zero(),
            BigRational::from_integer(square_root.into()),
            free,
        ))
    }

    /// Builds `a + b*sqrt(d)`; `d` need not be squarefree.
    pub fn with_radical(a: BigRational, b: BigRational, d: u64) -> Result<Self, ScalarError> {
        if d > MAX_RADICAND {
            return Err(ScalarError::RadicandTooLarge(d));
        }
        let (root, free) = extract_square(d);
        Ok(Self::make(a, b * BigRational::from_integer(root.into()), free))
    }

    /// Rational part `a` of the canonical form.
    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    /// Radical coefficient `b` of the canonical form.
    pub fn radical_part(&self) -> &BigRational {
        &self.b
    }

    /// Canonical radicand (`1` for rational values).
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True iff the canonical radical coefficient vanishes.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.b.is_zero() && self.a.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    /// Exact sign against zero, decided by integer arithmetic.
    pub fn sign(&self) -> Ordering {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        match (sa, sb) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            // Opposite signs: |a| vs |b|*sqrt(d), i.e. a^2 vs b^2*d.
            (sa, _) => {
                let a2 = &self.a * &self.a;
                let b2d = &self.b * &self.b * BigRational::from_integer(self.d.into());
                match a2.cmp(&b2d) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    fn radicand_for(&self, other: &Self) -> Result<u64, ScalarError> {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => Ok(1),
            (false, true) => Ok(self.d),
            (true, false) => Ok(other.d),
            (false, false) if self.d == other.d => Ok(self.d),
            (false, false) => Err(ScalarError::MixedRadicands {
                left: self.d,
                right: other.d,
            }),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ScalarError> {
        let d = self.radicand_for(other)?;
        Ok(Self::make(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        let d = self.radicand_for(other)?;
        Ok(Self::make(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        let d = self.radicand_for(other)?;
        let dd = BigRational::from_integer(d.into());
        let a = &self.a * &other.a + &self.b * &other.b * dd;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::make(a, b, d))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let d = self.radicand_for(other)?;
        let dd = BigRational::from_integer(d.into());
        // 1/(a + b sqrt d) = (a - b sqrt d) / (a^2 - b^2 d); the norm is
        // nonzero because d is squarefree (a^2 = b^2 d forces a = b = 0).
        let norm = &other.a * &other.a - &other.b * &other.b * &dd;
        debug_assert!(!norm.is_zero());
        let inv_a = &other.a / &norm;
        let inv_b = -(&other.b / &norm);
        let a = &self.a * &inv_a + &self.b * &inv_b * dd;
        let b = &self.a * &inv_b + &self.b * &inv_a;
        Ok(Self::make(a, b, d))
    }

    /// Exact comparison; errors when the operands live in different fields.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, ScalarError> {
        Ok(self.try_sub(other)?.sign())
    }

    pub fn recip(&self) -> Result<Self, ScalarError> {
        Self::one().try_div(self)
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplies by an integer.
    pub fn scale_int(&self, k: &BigInt) -> Self {
        let kk = BigRational::from_integer(k.clone());
        Self::make(&self.a * &kk, &self.b * &kk, self.d)
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        self.scale_int(&BigInt::from(k))
    }

    /// Exact floor, `max { k in Z | k <= x }`.
    pub fn floor(&self) -> BigInt {
        let mut f = self.a.floor().to_integer() + floor_radical(&self.b, self.d);
        // The two floors bound the true value within one unit; fix exactly.
        loop {
            match self.try_sub(&Self::from_bigint(&f + 1)).unwrap().sign() {
                Ordering::Less => {}
                _ => {
                    f += 1;
                    continue;
                }
            }
            match self.try_sub(&Self::from_bigint(f.clone())).unwrap().sign() {
                Ordering::Less => {
                    f -= 1;
                    continue;
                }
                _ => return f,
            }
        }
    }

    /// Fractional part `x - floor(x)`, exact and in `[0, 1)`.
    pub fn frac(&self) -> Self {
        self.try_sub(&Self::from_bigint(self.floor())).unwrap()
    }

    /// Nearest integer; half-integers round up and set the tie flag.
    pub fn nearest_integer(&self) -> (BigInt, bool) {
        let f = self.floor();
        let fr = self.frac();
        match fr.try_cmp(&Self::from_ratio(1, 2)).unwrap() {
            Ordering::Less => (f, false),
            Ordering::Greater => (f + 1, false),
            Ordering::Equal => (f + 1, true),
        }
    }

    /// Distance to the nearest integer, `min(frac(x), 1 - frac(x))`, exact.
    pub fn dist_to_integer(&self) -> Self {
        let fr = self.frac();
        let alt = Self::one().try_sub(&fr).unwrap();
        if fr.try_cmp(&alt).unwrap() == Ordering::Greater {
            alt
        } else {
            fr
        }
    }

    /// Rational bracket `lo <= x <= hi` with `hi - lo <= 10^-precision`.
    ///
    /// Exact inputs on the grid collapse to a zero-width bracket. The
    /// bounds come from the same integer-square bisection as `floor`;
    /// no floating point participates.
    pub fn to_interval(&self, precision: u32) -> (BigRational, BigRational) {
        let p: BigInt = BigInt::from(10u32).pow(precision);
        let scaled = self.scale_int(&p);
        let m = scaled.floor();
        let lo = BigRational::new(m.clone(), p.clone());
        if scaled.try_sub(&Self::from_bigint(m.clone())).unwrap().is_zero() {
            return (lo.clone(), lo);
        }
        let hi = BigRational::new(m + 1, p);
        (lo, hi)
    }

    /// Parses the scalar literal grammar:
    ///
    /// ```text
    /// expr   := term (('+'|'-') term)*
    /// term   := factor (('*'|'/') factor)*
    /// factor := INT | INT '/' INT | 'sqrt(' INT ')' | '(' expr ')' | '-' factor
    /// ```
    ///
    /// Whitespace is insignificant. Radicands are normalized to
    /// squarefree form; all radicals must land in a single field.
    pub fn parse(text: &str) -> Result<Self, ScalarError> {
        let mut p = Parser {
            bytes: text.as_bytes(),
            pos: 0,
        };
        p.skip_ws();
        let value = p.expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(ScalarError::Syntax {
                pos: p.pos,
                expected: "end of input",
            });
        }
        Ok(value)
    }
}

fn rational_sign(r: &BigRational) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Exact `floor(b * sqrt(d))` for rational `b` and squarefree `d`.
fn floor_radical(b: &BigRational, d: u64) -> BigInt {
    if b.is_zero() {
        return BigInt::zero();
    }
    let p = b.numer().abs();
    let q = b.denom().clone(); // positive by Ratio's invariant
    let s = (&p * &p * BigInt::from(d)).sqrt();
    let f = s.div_floor(&q);
    if b.is_positive() {
        f
    } else {
        // b*sqrt(d) is irrational here (d squarefree, d >= 2, b != 0),
        // so floor(-x) = -floor(x) - 1.
        -f - 1
    }
}

fn is_squarefree_small(d: u64) -> bool {
    extract_square(d).1 == d
}

/// Splits `n = s^2 * f` with `f` squarefree; returns `(s, f)`.
fn extract_square(n: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 0);
    }
    let mut free = n;
    let mut root = 1u64;
    let mut p = 2u64;
    while p * p <= free && p <= 1_000_000 {
        while free.is_multiple_of(p * p) {
            free /= p * p;
            root *= p;
        }
        p += 1;
    }
    (root, free)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ExactScalar, ScalarError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            if self.eat(b'+') {
                self.skip_ws();
                acc = acc.try_add(&self.term()?)?;
            } else if self.eat(b'-') {
                self.skip_ws();
                acc = acc.try_sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ExactScalar, ScalarError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                self.skip_ws();
                acc = acc.try_mul(&self.factor()?)?;
            } else if self.eat(b'/') {
                self.skip_ws();
                acc = acc.try_div(&self.factor()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<ExactScalar, ScalarError> {
        self.skip_ws();
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.factor()?)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(ScalarError::Syntax {
                        pos: self.pos,
                        expected: "')'",
                    });
                }
                Ok(inner)
            }
            Some(b's') => self.sqrt_literal(),
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(ExactScalar::from_bigint(n))
            }
            _ => Err(ScalarError::Syntax {
                pos: self.pos,
                expected: "integer, sqrt(..), '(' or '-'",
            }),
        }
    }

    fn sqrt_literal(&mut self) -> Result<ExactScalar, ScalarError> {
        const KW: &[u8] = b"sqrt(";
        if self.bytes.len() - self.pos < KW.len() || &self.bytes[self.pos..self.pos + KW.len()] != KW
        {
            return Err(ScalarError::Syntax {
                pos: self.pos,
                expected: "'sqrt('",
            });
        }
        self.pos += KW.len();
        self.skip_ws();
        let at = self.pos;
        let n = self.integer()?;
        let n = n.to_u64().ok_or(ScalarError::Syntax {
            pos: at,
            expected: "radicand within the supported bound",
        })?;
        self.skip_ws();
        if !self.eat(b')') {
            return Err(ScalarError::Syntax {
                pos: self.pos,
                expected: "')'",
            });
        }
        ExactScalar::sqrt(n)
    }

    fn integer(&mut self) -> Result<BigInt, ScalarError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ScalarError::Syntax {
                pos: start,
                expected: "integer",
            });
        }
        let mut n = BigInt::zero();
        for &c in &self.bytes[start..self.pos] {
            n = n * 10 + (c - b'0');
        }
        Ok(n)
    }
}

impl PartialOrd for ExactScalar {
    /// `None` when the operands live in different quadratic fields.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                self.$checked(rhs).expect("incompatible scalar operands")
            }
        }
        impl $trait for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::make(-&self.a, -&self.b, self.d)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ExactScalar {
    /// Canonical emission in the literal grammar, e.g. `12+6*sqrt(3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return fmt_rational(&self.a, f);
        }
        let babs = self.b.abs();
        let write_radical = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if !babs.is_one() {
                fmt_rational(&babs, f)?;
                write!(f, "*")?;
            }
            write!(f, "sqrt({})", self.d)
        };
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-")?;
            }
            return write_radical(f);
        }
        fmt_rational(&self.a, f)?;
        write!(f, "{}", if self.b.is_negative() { "-" } else { "+" })?;
        write_radical(f)
    }
}

/// A positive multiple of pi, kept symbolic so that action ratios stay
/// exact. Dividing two pi-multiples cancels the pi.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiMultiple {
    coefficient: ExactScalar,
}

impl PiMultiple {
    pub fn new(coefficient: ExactScalar) -> Self {
        PiMultiple { coefficient }
    }

    pub fn coefficient(&self) -> &ExactScalar {
        &self.coefficient
    }

    /// Ratio of two pi-multiples; the symbolic pi cancels.
    pub fn ratio(&self, other: &PiMultiple) -> Result<ExactScalar, ScalarError> {
        self.coefficient.try_div(&other.coefficient)
    }

    /// Divides by a plain scalar, keeping the pi factor.
    pub fn div_scalar(&self, s: &ExactScalar) -> Result<PiMultiple, ScalarError> {
        Ok(PiMultiple::new(self.coefficient.try_div(s)?))
    }

    pub fn scale_i64(&self, k: i64) -> PiMultiple {
        PiMultiple::new(self.coefficient.scale_i64(k))
    }
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficient == ExactScalar::one() {
            write!(f, "pi")
        } else {
            write!(f, "({})*pi", self.coefficient)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn s(text: &str) -> ExactScalar {
        ExactScalar::parse(text).unwrap()
    }

    #[test]
    fn parse_remark_values() {
        let x = s("2-sqrt(3)");
        assert_eq!(x.rational_part(), &BigRational::from_integer(2.into()));
        assert_eq!(x.radical_part(), &BigRational::from_integer((-1).into()));
        assert_eq!(x.radicand(), 3);
    }

    #[test]
    fn radical_squares_to_integer() {
        assert_eq!(s("sqrt(3)*sqrt(3)"), ExactScalar::from_int(3));
        assert_eq!(s("(2-sqrt(3))*(2+sqrt(3))"), ExactScalar::from_int(1));
    }

    #[test]
    fn non_squarefree_radicand_normalizes() {
        assert_eq!(s("sqrt(12)"), s("2*sqrt(3)"));
        assert_eq!(s("sqrt(4)"), ExactScalar::from_int(2));
        assert_eq!(s("sqrt(1)"), ExactScalar::from_int(1));
        assert_eq!(s("sqrt(0)"), ExactScalar::zero());
    }

    #[test]
    fn parse_errors_are_distinct() {
        assert!(matches!(
            ExactScalar::parse("sqrt(2)+sqrt(3)"),
            Err(ScalarError::MixedRadicands { left: 2, right: 3 })
        ));
        assert!(matches!(
            ExactScalar::parse("1/0"),
            Err(ScalarError::DivisionByZero)
        ));
        assert!(matches!(
            ExactScalar::parse("2+"),
            Err(ScalarError::Syntax { .. })
        ));
        assert!(matches!(
            ExactScalar::parse("sqrt(1000000000001)"),
            Err(ScalarError::RadicandTooLarge(_))
        ));
    }

    #[test]
    fn compare_against_bisection_anchor() {
        // 2 - sqrt(3) = 0.26794919... > 1/4, pinned by a 10-digit bracket.
        let x = s("2-sqrt(3)");
        let (lo, hi) = x.to_interval(10);
        let quarter = BigRational::new(1.into(), 4.into());
        assert!(lo > quarter && hi > quarter);
        assert_eq!(
            x.try_cmp(&ExactScalar::from_ratio(1, 4)).unwrap(),
            Ordering::Greater
        );
        assert_eq!(s("sqrt(3)").try_cmp(&s("sqrt(3)")).unwrap(), Ordering::Equal);
        assert_eq!(
            s("-sqrt(3)").try_cmp(&ExactScalar::zero()).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn compare_rejects_mixed_fields() {
        let a = ExactScalar::sqrt(2).unwrap();
        let b = ExactScalar::sqrt(3).unwrap();
        assert!(matches!(
            a.try_cmp(&b),
            Err(ScalarError::MixedRadicands { .. })
        ));
        assert_eq!(a.partial_cmp(&b), None);
    }

    #[test]
    fn floor_values() {
        assert_eq!(s("sqrt(3)").floor(), BigInt::from(1));
        assert_eq!(s("3+2*sqrt(3)").floor(), BigInt::from(6));
        assert_eq!(s("-sqrt(3)").floor(), BigInt::from(-2));
        assert_eq!(s("-7/2").floor(), BigInt::from(-4));
    }

    #[test]
    fn nearest_integer_values() {
        assert_eq!(s("2*sqrt(3)").nearest_integer(), (BigInt::from(3), false));
        assert_eq!(s("5").nearest_integer(), (BigInt::from(5), false));
        assert_eq!(s("7/2").nearest_integer(), (BigInt::from(4), true));
        assert_eq!(s("-7/2").nearest_integer(), (BigInt::from(-3), true));
    }

    #[test]
    fn dist_to_integer_values() {
        assert_eq!(s("sqrt(3)").dist_to_integer(), s("2-sqrt(3)"));
        assert_eq!(s("1/2").dist_to_integer(), s("1/2"));
        assert_eq!(s("7").dist_to_integer(), ExactScalar::zero());
    }

    #[test]
    fn interval_brackets() {
        let (lo, hi) = s("sqrt(3)").to_interval(3);
        let w = &hi - &lo;
        assert!(w <= BigRational::new(1.into(), 1000.into()));
        // 1.732 < sqrt(3) < 1.733
        assert!(lo >= BigRational::new(1732.into(), 1000.into()));
        assert!(hi <= BigRational::new(1733.into(), 1000.into()));

        let (lo, hi) = s("1/3").to_interval(2);
        assert!(lo <= BigRational::new(1.into(), 3.into()));
        assert!(hi >= BigRational::new(1.into(), 3.into()));
        assert!(&hi - &lo <= BigRational::new(1.into(), 100.into()));

        let (lo, hi) = ExactScalar::zero().to_interval(9);
        assert_eq!(lo, hi);
    }

    #[test]
    fn rationality_predicate() {
        assert!(s("6").is_rational());
        assert!(!s("2*sqrt(3)").is_rational());
        assert!(s("sqrt(3)-sqrt(3)").is_rational());
    }

    #[test]
    fn canonical_display_round_trips() {
        for text in [
            "12+6*sqrt(3)",
            "2-sqrt(3)",
            "-sqrt(3)",
            "1/6-1/12*sqrt(3)",
            "0",
            "-5/3",
            "sqrt(2)",
        ] {
            let v = s(text);
            assert_eq!(v.to_string(), text);
            assert_eq!(s(&v.to_string()), v);
        }
    }

    #[test]
    fn pi_multiples_cancel() {
        let act = PiMultiple::new(s("2"));
        let mean = s("6");
        let c = act.div_scalar(&mean).unwrap();
        assert_eq!(c.coefficient(), &s("1/3"));
        let ratio = act.ratio(&PiMultiple::new(s("2/3"))).unwrap();
        assert_eq!(ratio, s("3"));
    }
}

#[cfg(test)]
mod concurrency_tests {
    use super::*;

    #[test]
    fn values_are_share_and_send_safe() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<ExactScalar>();
        assert_send_sync::<PiMultiple>();
        assert_send_sync::<ScalarError>();
    }
}
