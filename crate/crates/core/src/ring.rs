//! The ground ring `R = Z[X, Y, Z^±1] / (X² = Y² = 1)`, its unit group, the
//! grading group `Z²` and the bilinear form `bil`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An element of the grading group `Z²`.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct Z2Degree {
    pub a: i64,
    pub b: i64,
}

impl Z2Degree {
    pub const ZERO: Self = Self::new(0, 0);
    /// Degree of a dot.
    pub const DOT: Self = Self::new(-1, -1);
    pub const CUP: Self = Self::new(0, 1);
    pub const CAP: Self = Self::new(1, 0);
    pub const ZIP: Self = Self::new(-1, 0);
    pub const UNZIP: Self = Self::new(0, -1);

    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    /// Quantum degree `-(a + b)`.
    pub fn qdeg(self) -> i64 {
        -(self.a + self.b)
    }

    pub fn scale(self, k: i64) -> Self {
        Self::new(self.a * k, self.b * k)
    }
}

impl Add for Z2Degree {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b)
    }
}

impl AddAssign for Z2Degree {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Z2Degree {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for Z2Degree {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl Sum for Z2Degree {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

impl fmt::Display for Z2Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// A monomial `X^x Y^y Z^z` without coefficient.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub x: u8,
    pub y: u8,
    pub z: i64,
}

impl Mono {
    pub const ONE: Self = Self { x: 0, y: 0, z: 0 };

    fn mul(self, o: Self) -> Self {
        Self {
            x: self.x ^ o.x,
            y: self.y ^ o.y,
            z: self.z.checked_add(o.z).expect("Z exponent overflow"),
        }
    }
}

/// A unit `±X^x Y^y Z^z` of `R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitMonomial {
    sign: i8,
    mono: Mono,
}

impl Default for UnitMonomial {
    fn default() -> Self {
        Self::ONE
    }
}

impl UnitMonomial {
    pub const ONE: Self = Self { sign: 1, mono: Mono::ONE };
    pub const MINUS_ONE: Self = Self { sign: -1, mono: Mono::ONE };
    pub const X: Self = Self { sign: 1, mono: Mono { x: 1, y: 0, z: 0 } };
    pub const Y: Self = Self { sign: 1, mono: Mono { x: 0, y: 1, z: 0 } };
    pub const XY: Self = Self { sign: 1, mono: Mono { x: 1, y: 1, z: 0 } };
    pub const Z: Self = Self { sign: 1, mono: Mono { x: 0, y: 0, z: 1 } };

    /// `sign` must be ±1; `x`, `y` are reduced mod 2.
    pub fn new(sign: i8, x: i64, y: i64, z: i64) -> Self {
        assert!(sign == 1 || sign == -1, "unit sign must be ±1");
        Self {
            sign,
            mono: Mono { x: x.rem_euclid(2) as u8, y: y.rem_euclid(2) as u8, z },
        }
    }

    pub fn sign(self) -> i8 {
        self.sign
    }
    pub fn x(self) -> u8 {
        self.mono.x
    }
    pub fn y(self) -> u8 {
        self.mono.y
    }
    pub fn z(self) -> i64 {
        self.mono.z
    }
    pub fn mono(self) -> Mono {
        self.mono
    }

    pub fn is_one(self) -> bool {
        self == Self::ONE
    }

    pub fn inv(self) -> Self {
        Self {
            sign: self.sign,
            mono: Mono {
                x: self.mono.x,
                y: self.mono.y,
                z: self.mono.z.checked_neg().expect("Z exponent overflow"),
            },
        }
    }

    pub fn pow(self, k: i64) -> Self {
        let base = if k < 0 { self.inv() } else { self };
        let k = k.unsigned_abs();
        Self {
            sign: if k % 2 == 1 { base.sign } else { 1 },
            mono: Mono {
                x: base.mono.x * (k % 2) as u8,
                y: base.mono.y * (k % 2) as u8,
                z: base.mono.z.checked_mul(k as i64).expect("Z exponent overflow"),
            },
        }
    }

    /// `(XY)^k`.
    pub fn xy_pow(k: usize) -> Self {
        if k.is_multiple_of(2) {
            Self::ONE
        } else {
            Self::XY
        }
    }

    pub fn specialize(self, s: Specialization) -> i64 {
        let mut v = self.sign as i64;
        if self.mono.x == 1 {
            v *= s.x as i64;
        }
        if self.mono.y == 1 {
            v *= s.y as i64;
        }
        if self.mono.z % 2 != 0 {
            v *= s.z as i64;
        }
        v
    }
}

impl Mul for UnitMonomial {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { sign: self.sign * o.sign, mono: self.mono.mul(o.mono) }
    }
}

impl MulAssign for UnitMonomial {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl Neg for UnitMonomial {
    type Output = Self;
    fn neg(self) -> Self {
        Self { sign: -self.sign, mono: self.mono }
    }
}

impl std::iter::Product for UnitMonomial {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ONE, Mul::mul)
    }
}

impl fmt::Display for UnitMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        RingElement::from(*self).fmt(f)
    }
}

/// `bil(g, h) = X^{ac} Y^{bd} Z^{ad - bc}` for `g = (a, b)`, `h = (c, d)`.
pub fn bil(g: Z2Degree, h: Z2Degree) -> UnitMonomial {
    UnitMonomial::new(1, g.a * h.a, g.b * h.b, g.a * h.b - g.b * h.a)
}

/// Values of `X`, `Y`, `Z` in `{±1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Specialization {
    pub x: i8,
    pub y: i8,
    pub z: i8,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("specialization values must be ±1, got ({0}, {1}, {2})")]
pub struct SpecializationError(pub i64, pub i64, pub i64);

impl Specialization {
    pub const EVEN: Self = Self { x: 1, y: 1, z: 1 };
    pub const ODD: Self = Self { x: 1, y: -1, z: 1 };

    pub fn new(x: i64, y: i64, z: i64) -> Result<Self, SpecializationError> {
        let ok = |v: i64| v == 1 || v == -1;
        if ok(x) && ok(y) && ok(z) {
            Ok(Self { x: x as i8, y: y as i8, z: z as i8 })
        } else {
            Err(SpecializationError(x, y, z))
        }
    }

    /// All eight points of `{±1}³`, even first.
    pub fn all() -> Vec<Self> {
        let mut v = Vec::with_capacity(8);
        for x in [1, -1] {
            for y in [1, -1] {
                for z in [1, -1] {
                    v.push(Self { x, y, z });
                }
            }
        }
        v
    }

    pub fn name(self) -> String {
        match self {
            Self::EVEN => "even".into(),
            Self::ODD => "odd".into(),
            s => format!("X={},Y={},Z={}", s.x, s.y, s.z),
        }
    }
}

/// An element of `R`: integer combination of monomials, sorted and without
/// zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RingElement {
    terms: Vec<(Mono, i64)>,
}

impl RingElement {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        UnitMonomial::ONE.into()
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_terms([(Mono::ONE, c)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, i64)>) -> Self {
        let mut v: Vec<(Mono, i64)> = terms.into_iter().collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(Mono, i64)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => {
                    *lc = lc.checked_add(c).expect("coefficient overflow");
                }
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Self { terms: out }
    }

    pub fn terms(&self) -> &[(Mono, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(u)` if this element is a single term with coefficient ±1.
    pub fn as_unit(&self) -> Option<UnitMonomial> {
        match self.terms.as_slice() {
            [(m, c)] if *c == 1 || *c == -1 => Some(UnitMonomial { sign: *c as i8, mono: *m }),
            _ => None,
        }
    }

    pub fn scale(&self, u: UnitMonomial) -> Self {
        if u.is_one() {
            return self.clone();
        }
        Self::from_terms(self.terms.iter().map(|&(m, c)| (m.mul(u.mono), c * u.sign as i64)))
    }

    pub fn specialize(&self, s: Specialization) -> i64 {
        self.terms.iter().fold(0i64, |acc, &(m, c)| {
            let u = UnitMonomial { sign: 1, mono: m };
            acc.checked_add(c * u.specialize(s)).expect("coefficient overflow")
        })
    }
}

impl From<UnitMonomial> for RingElement {
    fn from(u: UnitMonomial) -> Self {
        Self { terms: vec![(u.mono, u.sign as i64)] }
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, o: &RingElement) -> RingElement {
        RingElement::from_terms(self.terms.iter().chain(o.terms.iter()).copied())
    }
}

impl Add for RingElement {
    type Output = RingElement;
    fn add(self, o: RingElement) -> RingElement {
        &self + &o
    }
}

impl AddAssign<&RingElement> for RingElement {
    fn add_assign(&mut self, o: &RingElement) {
        *self = &*self + o;
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement { terms: self.terms.iter().map(|&(m, c)| (m, -c)).collect() }
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, o: &RingElement) -> RingElement {
        self + &(-o)
    }
}

impl Sub for RingElement {
    type Output = RingElement;
    fn sub(self, o: RingElement) -> RingElement {
        &self - &o
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, o: &RingElement) -> RingElement {
        let mut v = Vec::with_capacity(self.terms.len() * o.terms.len());
        for &(m1, c1) in &self.terms {
            for &(m2, c2) in &o.terms {
                v.push((m1.mul(m2), c1.checked_mul(c2).expect("coefficient overflow")));
            }
        }
        RingElement::from_terms(v)
    }
}

impl Mul for RingElement {
    type Output = RingElement;
    fn mul(self, o: RingElement) -> RingElement {
        &self * &o
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, &(m, c)) in self.terms.iter().enumerate() {
            let mut body = String::new();
            if m.x == 1 {
                body.push('X');
            }
            if m.y == 1 {
                body.push('Y');
            }
            match m.z {
                0 => {}
                1 => body.push('Z'),
                z => body.push_str(&format!("Z^{z}")),
            }
            if c < 0 {
                f.write_str("-")?;
            } else if k > 0 {
                f.write_str("+")?;
            }
            if c.abs() != 1 || body.is_empty() {
                write!(f, "{}", c.unsigned_abs())?;
            }
            f.write_str(&body)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse ring element {text:?}: {reason}")]
pub struct ParseRingError {
    pub text: String,
    pub reason: String,
}

impl FromStr for RingElement {
    type Err = ParseRingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| ParseRingError { text: s.to_string(), reason: reason.into() };
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(err("empty input"));
        }
        let mut terms = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let mut sign = 1i64;
            match chars[i] {
                '+' if i > 0 => i += 1,
                '-' => {
                    sign = -1;
                    i += 1;
                }
                _ if i > 0 => return Err(err("expected '+' or '-' between terms")),
                _ => {}
            }
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let coef: i64 = if i > start {
                chars[start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| err("coefficient out of range"))?
            } else {
                1
            };
            let mut u = UnitMonomial::ONE;
            let mut factors = 0;
            while i < chars.len() && matches!(chars[i], 'X' | 'Y' | 'Z') {
                factors += 1;
                let c = chars[i];
                i += 1;
                match c {
                    'X' => u *= UnitMonomial::X,
                    'Y' => u *= UnitMonomial::Y,
                    _ => {
                        let mut e = 1i64;
                        if i < chars.len() && chars[i] == '^' {
                            i += 1;
                            let es = i;
                            if i < chars.len() && chars[i] == '-' {
                                i += 1;
                            }
                            while i < chars.len() && chars[i].is_ascii_digit() {
                                i += 1;
                            }
                            e = chars[es..i]
                                .iter()
                                .collect::<String>()
                                .parse()
                                .map_err(|_| err("bad Z exponent"))?;
                        }
                        u *= UnitMonomial::Z.pow(e);
                    }
                }
            }
            if i == start && factors == 0 {
                return Err(err("empty term"));
            }
            terms.push((u.mono, sign * coef * u.sign as i64));
        }
        Ok(Self::from_terms(terms))
    }
}

impl Serialize for RingElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RingElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for UnitMonomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn re(s: &str) -> RingElement {
        s.parse().unwrap()
    }

    #[test]
    fn bil_examples() {
        let u = Z2Degree::UNZIP;
        assert_eq!(bil(u, u), UnitMonomial::Y);
        assert_eq!(bil(Z2Degree::ZERO, Z2Degree::new(5, -3)), UnitMonomial::ONE);
        assert_eq!(bil(Z2Degree::ZIP, Z2Degree::UNZIP), UnitMonomial::Z);
        assert_eq!(bil(Z2Degree::UNZIP, Z2Degree::ZIP), UnitMonomial::Z.inv());
        assert_eq!(bil(Z2Degree::DOT, Z2Degree::DOT), UnitMonomial::XY);
    }

    #[test]
    fn ring_examples() {
        assert_eq!(re("1+XY") + re("-1"), re("XY"));
        assert_eq!(re("X") * re("X"), RingElement::one());
        assert_eq!(re("Z") * re("Z^-1"), RingElement::one());
        assert_eq!(re("1+XY").specialize(Specialization::ODD), 0);
        assert_eq!(re("-Y").specialize(Specialization::ODD), 1);
        assert_eq!(re("XZ^2").specialize(Specialization::EVEN), 1);
    }

    #[test]
    fn render_parse() {
        for s in ["0", "1", "-1", "1+XY", "-Y", "XZ^2", "3-YZ+2XZ^-1", "-4XYZ^-7"] {
            assert_eq!(re(s).to_string(), s);
        }
        assert!("".parse::<RingElement>().is_err());
        assert!("2W".parse::<RingElement>().is_err());
        assert!("1++X".parse::<RingElement>().is_err());
    }

    #[test]
    fn specialization_rejects_other_values() {
        assert!(Specialization::new(1, 2, 1).is_err());
        assert_eq!(Specialization::new(1, -1, 1), Ok(Specialization::ODD));
    }

    fn deg() -> impl Strategy<Value = Z2Degree> {
        (-6i64..6, -6i64..6).prop_map(|(a, b)| Z2Degree::new(a, b))
    }

    fn elem() -> impl Strategy<Value = RingElement> {
        prop::collection::vec((0u8..2, 0u8..2, -4i64..4, -5i64..5), 0..5).prop_map(|v| {
            RingElement::from_terms(v.into_iter().map(|(x, y, z, c)| (Mono { x, y, z }, c)))
        })
    }

    proptest! {
        #[test]
        fn bil_bilinear_and_symmetric(g in deg(), g2 in deg(), h in deg()) {
            prop_assert_eq!(bil(g + g2, h), bil(g, h) * bil(g2, h));
            prop_assert_eq!(bil(h, g + g2), bil(h, g) * bil(h, g2));
            prop_assert_eq!(bil(g, h) * bil(h, g), UnitMonomial::ONE);
            prop_assert_eq!(bil(g, h).inv(), bil(-g, h));
        }

        #[test]
        fn specialize_is_homomorphism(p in elem(), q in elem(), x in prop::bool::ANY, y in prop::bool::ANY, z in prop::bool::ANY) {
            let s = Specialization::new(if x {1} else {-1}, if y {1} else {-1}, if z {1} else {-1}).unwrap();
            prop_assert_eq!((&p * &q).specialize(s), p.specialize(s) * q.specialize(s));
            prop_assert_eq!((&p + &q).specialize(s), p.specialize(s) + q.specialize(s));
        }

        #[test]
        fn ring_axioms(p in elem(), q in elem(), r in elem()) {
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert!((&p - &p).is_zero());
        }

        #[test]
        fn text_round_trip(p in elem()) {
            prop_assert_eq!(p.to_string().parse::<RingElement>().unwrap(), p);
        }

        #[test]
        fn units_invert(s in prop::bool::ANY, x in 0i64..2, y in 0i64..2, z in -9i64..9) {
            let u = UnitMonomial::new(if s {1} else {-1}, x, y, z);
            prop_assert_eq!(u * u.inv(), UnitMonomial::ONE);
            prop_assert_eq!(RingElement::from(u).as_unit(), Some(u));
        }
    }
}
