//! Exact scalars: fractions of parameter polynomials over ℤ[i].
//!
//! A `Coeff` is `num/den` where both sides are sparse polynomials in the
//! declared parameters with Gaussian-integer coefficients. Equality is
//! decided by cross-multiplication, so no polynomial gcd machinery is
//! needed; a cheap content/unit normalization after every operation keeps
//! representatives small and printing deterministic. With no parameters in
//! play a value collapses to a Gaussian rational in lowest terms with a
//! positive real denominator.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gaussian::GaussInt;

/// Sparse polynomial in the parameters, keyed by exponent vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamPoly {
    nparams: usize,
    terms: BTreeMap<Vec<u32>, GaussInt>,
}

impl ParamPoly {
    pub fn zero(nparams: usize) -> Self {
        ParamPoly {
            nparams,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nparams: usize, c: GaussInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nparams], c);
        }
        ParamPoly { nparams, terms }
    }

    pub fn one(nparams: usize) -> Self {
        ParamPoly::constant(nparams, GaussInt::one())
    }

    pub fn var(nparams: usize, idx: usize) -> Self {
        assert!(idx < nparams);
        let mut exps = vec![0; nparams];
        exps[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, GaussInt::one());
        ParamPoly { nparams, terms }
    }

    pub fn nparams(&self) -> usize {
        self.nparams
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_value(&self) -> Option<GaussInt> {
        if self.is_zero() {
            return Some(GaussInt::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &GaussInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert_add(&mut self, exps: Vec<u32>, c: GaussInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &ParamPoly) -> ParamPoly {
        assert_eq!(self.nparams, rhs.nparams);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &ParamPoly) -> ParamPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> ParamPoly {
        ParamPoly {
            nparams: self.nparams,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &ParamPoly) -> ParamPoly {
        assert_eq!(self.nparams, rhs.nparams);
        let mut out = ParamPoly::zero(self.nparams);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_add(exps, ca * cb);
            }
        }
        out
    }

    pub fn mul_gauss(&self, c: &GaussInt) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero(self.nparams);
        }
        ParamPoly {
            nparams: self.nparams,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn conj(&self) -> ParamPoly {
        ParamPoly {
            nparams: self.nparams,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.conj()))
                .collect(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    /// Gaussian-integer content (gcd of all coefficients), canonical form.
    pub fn content(&self) -> GaussInt {
        let mut g = GaussInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_unit() {
                break;
            }
        }
        g
    }

    /// Per-parameter minimum exponent over all terms.
    fn monomial_content(&self) -> Vec<u32> {
        let mut m = vec![u32::MAX; self.nparams];
        for e in self.terms.keys() {
            for (mi, &ei) in m.iter_mut().zip(e) {
                *mi = (*mi).min(ei);
            }
        }
        if self.terms.is_empty() {
            m.fill(0);
        }
        m
    }

    fn div_content(&self, g: &GaussInt, mono: &[u32]) -> ParamPoly {
        ParamPoly {
            nparams: self.nparams,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let exps: Vec<u32> = e.iter().zip(mono).map(|(x, y)| x - y).collect();
                    (exps, c.div_exact(g).expect("content division is exact"))
                })
                .collect(),
        }
    }

    fn leading_coeff(&self) -> Option<&GaussInt> {
        self.terms.values().next_back()
    }

    /// Re-indexes parameters: entry `j` of `map` is the new position of the
    /// old parameter `j`.
    pub fn remap_params(&self, map: &[usize], new_nparams: usize) -> ParamPoly {
        assert_eq!(map.len(), self.nparams);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut exps = vec![0u32; new_nparams];
                for (j, &ej) in e.iter().enumerate() {
                    exps[map[j]] = ej;
                }
                (exps, c.clone())
            })
            .collect();
        ParamPoly {
            nparams: new_nparams,
            terms,
        }
    }

    /// Dense coefficient list if this polynomial involves only the parameter
    /// at `idx` (constant terms allowed).
    pub fn as_unipoly_in(&self, idx: usize) -> Option<Vec<GaussInt>> {
        let mut coeffs: Vec<GaussInt> = Vec::new();
        for (e, c) in &self.terms {
            for (j, &ej) in e.iter().enumerate() {
                if j != idx && ej != 0 {
                    return None;
                }
            }
            let d = e[idx] as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, GaussInt::zero());
            }
            coeffs[d] = c.clone();
        }
        Some(coeffs)
    }

    /// Substitutes parameter values, producing an exact scalar. Unbound
    /// parameters remain symbolic.
    pub fn eval(&self, bindings: &BTreeMap<usize, Coeff>) -> Coeff {
        let mut acc = Coeff::zero(self.nparams);
        for (e, c) in &self.terms {
            let mut factor = Coeff::from_gauss(self.nparams, c.clone());
            let mut residual = vec![0u32; self.nparams];
            for (j, &ej) in e.iter().enumerate() {
                if ej == 0 {
                    continue;
                }
                if let Some(v) = bindings.get(&j) {
                    for _ in 0..ej {
                        factor = factor.mul(v);
                    }
                } else {
                    residual[j] = ej;
                }
            }
            if residual.iter().any(|&x| x != 0) {
                let mut mono = ParamPoly::zero(self.nparams);
                mono.terms.insert(residual, GaussInt::one());
                factor = factor.mul(&Coeff::from_parampoly(mono));
            }
            acc = acc.add(&factor);
        }
        acc
    }

    /// True when every term has even exponents and a positive real
    /// coefficient: such a polynomial is positive wherever all parameters are
    /// real and nonzero.
    pub fn is_even_positive(&self) -> bool {
        !self.is_zero()
            && self.terms.iter().all(|(e, c)| {
                e.iter().all(|&x| x % 2 == 0) && c.is_real() && c.re.is_positive()
            })
    }

    pub fn is_even_negative(&self) -> bool {
        self.neg().is_even_positive()
    }

    fn term_string(&self, names: &[String]) -> Vec<(bool, String)> {
        // highest monomial first
        self.terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(j, &x)| {
                        if x == 1 {
                            names[j].clone()
                        } else {
                            format!("{}^{}", names[j], x)
                        }
                    })
                    .collect();
                let (neg, c_abs) = displayable_negation(c);
                let cs = format!("{c_abs}");
                let body = if mono.is_empty() {
                    wrap_if_mixed(&cs, &c_abs)
                } else if c_abs.is_one() {
                    mono.join("*")
                } else {
                    format!("{}*{}", wrap_if_mixed(&cs, &c_abs), mono.join("*"))
                };
                (neg, body)
            })
            .collect()
    }

    /// Renders with parameter names, in the expression grammar.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (neg, body)) in self.term_string(names).into_iter().enumerate() {
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&body);
        }
        out
    }
}

/// Splits off a leading minus sign when the coefficient is purely real
/// negative or purely imaginary negative.
fn displayable_negation(c: &GaussInt) -> (bool, GaussInt) {
    if (c.im.is_zero() && c.re.is_negative()) || (c.re.is_zero() && c.im.is_negative()) {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

fn wrap_if_mixed(s: &str, c: &GaussInt) -> String {
    if !c.re.is_zero() && !c.im.is_zero() {
        format!("({s})")
    } else {
        s.to_string()
    }
}

/// Exact scalar: a fraction of parameter polynomials.
#[derive(Debug, Clone)]
pub struct Coeff {
    num: ParamPoly,
    den: ParamPoly,
}

impl Coeff {
    pub fn new(num: ParamPoly, den: ParamPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut c = Coeff { num, den };
        c.normalize();
        Ok(c)
    }

    pub fn from_parampoly(num: ParamPoly) -> Self {
        let den = ParamPoly::one(num.nparams);
        let mut c = Coeff { num, den };
        c.normalize();
        c
    }

    pub fn zero(nparams: usize) -> Self {
        Coeff {
            num: ParamPoly::zero(nparams),
            den: ParamPoly::one(nparams),
        }
    }

    pub fn one(nparams: usize) -> Self {
        Coeff {
            num: ParamPoly::one(nparams),
            den: ParamPoly::one(nparams),
        }
    }

    pub fn from_int(nparams: usize, n: impl Into<BigInt>) -> Self {
        Coeff::from_gauss(nparams, GaussInt::from_int(n))
    }

    pub fn from_gauss(nparams: usize, c: GaussInt) -> Self {
        Coeff {
            num: ParamPoly::constant(nparams, c),
            den: ParamPoly::one(nparams),
        }
    }

    pub fn from_ratio(nparams: usize, n: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        Coeff::new(
            ParamPoly::constant(nparams, GaussInt::from_int(n)),
            ParamPoly::constant(nparams, GaussInt::from_int(d)),
        )
    }

    pub fn imaginary_unit(nparams: usize) -> Self {
        Coeff::from_gauss(nparams, GaussInt::i())
    }

    pub fn param(nparams: usize, idx: usize) -> Self {
        Coeff::from_parampoly(ParamPoly::var(nparams, idx))
    }

    pub fn nparams(&self) -> usize {
        self.num.nparams
    }

    pub fn num(&self) -> &ParamPoly {
        &self.num
    }

    pub fn den(&self) -> &ParamPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// Both sides free of parameters.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// For constants: the pair (numerator, denominator) with the denominator
    /// a positive integer.
    pub fn as_gauss_ratio(&self) -> Option<(GaussInt, BigInt)> {
        if !self.is_constant() {
            return None;
        }
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        debug_assert!(d.is_real() && d.re.is_positive());
        Some((n, d.re))
    }

    pub fn is_real(&self) -> bool {
        self.num.is_real() && self.den.is_real()
    }

    pub fn add(&self, rhs: &Coeff) -> Coeff {
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        let mut c = Coeff { num, den };
        c.normalize();
        c
    }

    pub fn sub(&self, rhs: &Coeff) -> Coeff {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Coeff {
        Coeff {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &Coeff) -> Coeff {
        let mut c = Coeff {
            num: self.num.mul(&rhs.num),
            den: self.den.mul(&rhs.den),
        };
        c.normalize();
        c
    }

    pub fn div(&self, rhs: &Coeff) -> Result<Coeff> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut c = Coeff {
            num: self.num.mul(&rhs.den),
            den: self.den.mul(&rhs.num),
        };
        c.normalize();
        Ok(c)
    }

    pub fn inv(&self) -> Result<Coeff> {
        Coeff::one(self.nparams()).div(self)
    }

    pub fn conj(&self) -> Coeff {
        let mut c = Coeff {
            num: self.num.conj(),
            den: self.den.conj(),
        };
        c.normalize();
        c
    }

    /// Real part, treating all parameters as real.
    pub fn real_part(&self) -> Coeff {
        // num/den = num*conj(den) / (den*conj(den)); the denominator is real.
        let d = self.den.mul(&self.den.conj());
        let n = self.num.mul(&self.den.conj());
        let re = ParamPoly {
            nparams: n.nparams,
            terms: n
                .terms
                .iter()
                .filter(|(_, c)| !c.re.is_zero())
                .map(|(e, c)| (e.clone(), GaussInt::new(c.re.clone(), BigInt::zero())))
                .collect(),
        };
        Coeff::new(re, d).expect("den*conj(den) is nonzero")
    }

    /// Imaginary part, treating all parameters as real.
    pub fn imag_part(&self) -> Coeff {
        let d = self.den.mul(&self.den.conj());
        let n = self.num.mul(&self.den.conj());
        let im = ParamPoly {
            nparams: n.nparams,
            terms: n
                .terms
                .iter()
                .filter(|(_, c)| !c.im.is_zero())
                .map(|(e, c)| (e.clone(), GaussInt::new(c.im.clone(), BigInt::zero())))
                .collect(),
        };
        Coeff::new(im, d).expect("den*conj(den) is nonzero")
    }

    /// Re-indexes parameters; see [`ParamPoly::remap_params`].
    pub fn remap_params(&self, map: &[usize], new_nparams: usize) -> Coeff {
        Coeff {
            num: self.num.remap_params(map, new_nparams),
            den: self.den.remap_params(map, new_nparams),
        }
    }

    /// Substitutes parameter values. Errors if the denominator vanishes
    /// under the substitution.
    pub fn subst_params(&self, bindings: &BTreeMap<usize, Coeff>) -> Result<Coeff> {
        let n = self.num.eval(bindings);
        let d = self.den.eval(bindings);
        if d.is_zero() {
            return Err(Error::SubstitutionZeroDenominator);
        }
        n.div(&d)
    }

    /// Structural positivity for real data: `Some(sign)` when decidable.
    /// Constants compare exactly; parametric values are decided only when
    /// numerator and denominator are sums of even monomials with one-signed
    /// real coefficients (parameters assumed real and nonzero).
    pub fn sign_if_decidable(&self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering;
        if self.is_zero() {
            return Some(Ordering::Equal);
        }
        if let Some((n, _)) = self.as_gauss_ratio() {
            if !n.is_real() {
                return None;
            }
            return Some(n.re.cmp(&BigInt::zero()));
        }
        let ns = if self.num.is_even_positive() {
            1
        } else if self.num.is_even_negative() {
            -1
        } else {
            return None;
        };
        let ds = if self.den.is_even_positive() {
            1
        } else if self.den.is_even_negative() {
            -1
        } else {
            return None;
        };
        Some((ns * ds).cmp(&0))
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = ParamPoly::one(self.den.nparams);
            return;
        }
        if let Some(d) = self.den.constant_value() {
            // constant denominator: make it a positive integer, then strip
            // the integer gcd shared with the numerator
            if !(d.is_real() && d.re.is_positive()) {
                self.num = self.num.mul_gauss(&d.conj());
                self.den = ParamPoly::constant(self.den.nparams, GaussInt::from_int(d.norm()));
            }
            let den_int = self
                .den
                .constant_value()
                .expect("constant denominator")
                .re;
            let mut g = den_int.clone();
            for c in self.num.terms.values() {
                g = g.gcd(&c.re).gcd(&c.im);
                if g.is_one() {
                    break;
                }
            }
            if !g.is_one() {
                let gg = GaussInt::from_int(g);
                self.num = self.num.div_content(&gg, &vec![0; self.num.nparams]);
                self.den = self.den.div_content(&gg, &vec![0; self.den.nparams]);
            }
            return;
        }
        // shared content: gcd of the Gaussian contents plus the common
        // parameter-monomial factor
        let g = self.num.content().gcd(&self.den.content());
        let mn = self.num.monomial_content();
        let md = self.den.monomial_content();
        let mono: Vec<u32> = mn.iter().zip(&md).map(|(a, b)| *a.min(b)).collect();
        if !g.is_one() || mono.iter().any(|&x| x > 0) {
            self.num = self.num.div_content(&g, &mono);
            self.den = self.den.div_content(&g, &mono);
        }
        // canonical unit on the leading denominator coefficient
        if let Some(lc) = self.den.leading_coeff() {
            let (u, _) = lc.canonical_unit_factor();
            if !u.is_one() {
                self.num = self.num.mul_gauss(&u);
                self.den = self.den.mul_gauss(&u);
            }
        }
    }

    /// Renders with parameter names, in the expression grammar.
    pub fn render(&self, names: &[String]) -> String {
        let n = self.num.render(names);
        if self.den == ParamPoly::one(self.den.nparams) {
            return n;
        }
        let d = self.den.render(names);
        let np = if self.num.num_terms() > 1 || n.starts_with('-') {
            format!("({n})")
        } else {
            n
        };
        // a `*` inside an unparenthesized denominator would re-associate on
        // reparse: x/2*a is (x/2)*a, not x/(2*a)
        let dp = if self.den.num_terms() > 1 || d.contains('*') || d.starts_with('-') {
            format!("({d})")
        } else {
            d
        };
        format!("{np}/{dp}")
    }
}

/// Cross-multiplication equality: p/q = r/s iff p·s = r·q identically.
impl PartialEq for Coeff {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for Coeff {}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // positional names for contexts that are not at hand
        let names: Vec<String> = (0..self.nparams()).map(|j| format!("p{j}")).collect();
        write!(f, "{}", self.render(&names))
    }
}
