//! Exact arithmetic in `F_p` and `F_{p^h}` for odd `p` and `h <= 3`.
//!
//! Elements are stored as an index `c0 + c1*p + c2*p^2` over the power basis
//! of a canonical modulus, so the natural integer order on the index is the
//! element order used everywhere downstream (highest coordinate most
//! significant, constant coordinate least). Multiplication goes through
//! discrete log tables built from a primitive element found at construction.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Largest field size supported; keeps every table index inside `u32` and
/// every table under a few hundred kilobytes.
pub const MAX_FIELD_SIZE: u32 = 1 << 16;

const ADD_TABLE_LIMIT: u32 = 512;
const NO_ROOT: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    /// The characteristic is not an odd prime.
    InvalidCharacteristic(u32),
    /// Extension degree outside `1..=3`.
    UnsupportedDegree(u32),
    /// `p^h` exceeds [`MAX_FIELD_SIZE`].
    FieldTooLarge { p: u32, h: u32 },
    /// Coordinate vector of the wrong length or with an entry `>= p`.
    InvalidCoordinates,
    /// Two interpolation samples share an abscissa.
    DuplicateNode,
    /// Fewer samples than `degree_bound + 1`.
    NotEnoughSamples { needed: usize, got: usize },
    /// Extra samples disagree with the interpolated polynomial.
    InconsistentSamples,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::InvalidCharacteristic(p) => write!(f, "{p} is not an odd prime"),
            FieldError::UnsupportedDegree(h) => {
                write!(f, "extension degree {h} is not supported (expected 1..=3)")
            }
            FieldError::FieldTooLarge { p, h } => {
                write!(f, "field of size {p}^{h} exceeds {MAX_FIELD_SIZE} elements")
            }
            FieldError::InvalidCoordinates => write!(f, "invalid field element coordinates"),
            FieldError::DuplicateNode => write!(f, "duplicate interpolation node"),
            FieldError::NotEnoughSamples { needed, got } => {
                write!(f, "interpolation needs {needed} samples, got {got}")
            }
            FieldError::InconsistentSamples => {
                write!(f, "samples are inconsistent with the degree bound")
            }
        }
    }
}

impl core::error::Error for FieldError {}

/// A field element, valid only relative to the [`FieldCtx`] that produced it.
///
/// Because every context for a given `(p, h)` uses the same canonical
/// modulus, elements are portable between contexts with equal `(p, h)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FElem(u32);

impl FElem {
    pub const ZERO: FElem = FElem(0);
    pub const ONE: FElem = FElem(1);

    /// Position of the element in the canonical enumeration of the field.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    p: u32,
    h: u32,
    q: u32,
    modulus: Vec<u32>,
    /// Coordinates of each element, constant term first.
    digits: Vec<[u32; 3]>,
    powers_of_p: [u32; 3],
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    frob: Vec<u32>,
    add: Option<Vec<u32>>,
    /// One solution of `y^p - y = c` for each `c`, or `NO_ROOT`.
    as_root: Vec<u32>,
}

/// Arithmetic context for `F_{p^h}`. Cheap to clone.
#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<Tables>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.inner.p)
            .field("h", &self.inner.h)
            .field("modulus", &self.inner.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p
            && self.inner.h == other.inner.h
            && self.inner.modulus == other.inner.modulus
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiply two polynomials over `F_p` given as coordinate slices (constant
/// first) and reduce modulo the monic `modulus`.
fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let h = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * h.max(1)];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p as u64;
        }
    }
    // Reduce from the top: t^h = -(m_0 + m_1 t + ... + m_{h-1} t^{h-1}).
    for top in (h..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (k, &mk) in modulus[..h].iter().enumerate() {
            let idx = top - h + k;
            let sub = c * mk as u64 % p as u64;
            prod[idx] = (prod[idx] + p as u64 - sub) % p as u64;
        }
    }
    prod[..h].iter().map(|&c| c as u32).collect()
}

fn has_root(coeffs: &[u32], p: u32) -> bool {
    (0..p).any(|t| {
        let mut acc = 0u64;
        for &c in coeffs.iter().rev() {
            acc = (acc * t as u64 + c as u64) % p as u64;
        }
        acc == 0
    })
}

/// Lexicographically smallest monic irreducible of degree `h` over `F_p`,
/// comparing coefficient tuples constant term first. For `h <= 3` a
/// polynomial is irreducible iff it has no root.
fn canonical_modulus(p: u32, h: u32) -> Vec<u32> {
    if h == 1 {
        return vec![0, 1];
    }
    let h = h as usize;
    let mut tuple = vec![0u32; h];
    loop {
        let mut poly = tuple.clone();
        poly.push(1);
        if !has_root(&poly, p) {
            return poly;
        }
        // Increment with the first coordinate most significant.
        let mut k = h;
        loop {
            k -= 1;
            tuple[k] += 1;
            if tuple[k] < p {
                break;
            }
            tuple[k] = 0;
            assert!(k > 0, "no irreducible polynomial found");
        }
    }
}

impl FieldCtx {
    /// Builds `F_{p^h}` with its canonical modulus.
    pub fn new(p: u32, h: u32) -> Result<Self, FieldError> {
        if p == 2 || !is_prime(p) {
            return Err(FieldError::InvalidCharacteristic(p));
        }
        if !(1..=3).contains(&h) {
            return Err(FieldError::UnsupportedDegree(h));
        }
        let q = (p as u64).pow(h);
        if q > MAX_FIELD_SIZE as u64 {
            return Err(FieldError::FieldTooLarge { p, h });
        }
        let q = q as u32;
        let modulus = canonical_modulus(p, h);
        let mut powers_of_p = [0u32; 3];
        for (i, slot) in powers_of_p.iter_mut().enumerate().take(h as usize) {
            *slot = p.pow(i as u32);
        }
        let digits: Vec<[u32; 3]> = (0..q)
            .map(|idx| {
                let mut d = [0u32; 3];
                let mut rest = idx;
                for slot in d.iter_mut().take(h as usize) {
                    *slot = rest % p;
                    rest /= p;
                }
                d
            })
            .collect();
        let compose =
            |d: &[u32]| -> u32 { d.iter().zip(powers_of_p.iter()).map(|(&c, &w)| c * w).sum() };
        let slow_mul = |a: u32, b: u32| -> u32 {
            let da = &digits[a as usize][..h as usize];
            let db = &digits[b as usize][..h as usize];
            compose(&poly_mul_mod(da, db, &modulus, p))
        };

        // Primitive element: first nonzero index whose powers hit every
        // nonzero element.
        let mut exp = Vec::new();
        for g in 1..q {
            let mut seq = Vec::with_capacity(q as usize - 1);
            let mut cur = 1u32;
            loop {
                seq.push(cur);
                cur = slow_mul(cur, g);
                if cur == 1 {
                    break;
                }
            }
            if seq.len() == q as usize - 1 {
                exp = seq;
                break;
            }
        }
        let mut log = vec![0u32; q as usize];
        for (k, &e) in exp.iter().enumerate() {
            log[e as usize] = k as u32;
        }
        let order = exp.len();
        let mut doubled = exp.clone();
        doubled.extend_from_slice(&exp);
        let exp = doubled;

        let neg: Vec<u32> = digits
            .iter()
            .map(|d| compose(&d.map(|c| (p - c) % p)[..h as usize]))
            .collect();

        let add = (q <= ADD_TABLE_LIMIT).then(|| {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    let da = digits[a as usize];
                    let db = digits[b as usize];
                    let mut s = [0u32; 3];
                    for k in 0..3 {
                        s[k] = (da[k] + db[k]) % p;
                    }
                    table[(a * q + b) as usize] = compose(&s[..h as usize]);
                }
            }
            table
        });

        let frob: Vec<u32> = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    let l = log[a as usize] as u64 * p as u64 % order as u64;
                    exp[l as usize]
                }
            })
            .collect();
        let mut as_root = vec![NO_ROOT; q as usize];
        for y in 0..q {
            let fy = digits[frob[y as usize] as usize];
            let dy = digits[y as usize];
            let mut c = [0u32; 3];
            for k in 0..h as usize {
                c[k] = (fy[k] + p - dy[k]) % p;
            }
            let c = compose(&c[..h as usize]);
            if as_root[c as usize] == NO_ROOT {
                as_root[c as usize] = y;
            }
        }

        Ok(FieldCtx {
            inner: Arc::new(Tables {
                p,
                h,
                q,
                modulus,
                digits,
                powers_of_p,
                exp,
                log,
                neg,
                frob,
                add,
                as_root,
            }),
        })
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn h(&self) -> u32 {
        self.inner.h
    }

    /// Number of elements, `p^h`.
    pub fn size(&self) -> u32 {
        self.inner.q
    }

    /// Monic modulus, constant term first, length `h + 1`.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FElem> + Clone {
        (0..self.inner.q).map(FElem)
    }

    /// Nonzero elements in canonical order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FElem> + Clone {
        (1..self.inner.q).map(FElem)
    }

    pub fn coords(&self, a: FElem) -> Vec<u32> {
        self.inner.digits[a.0 as usize][..self.inner.h as usize].to_vec()
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<FElem, FieldError> {
        let t = &self.inner;
        if coords.len() != t.h as usize || coords.iter().any(|&c| c >= t.p) {
            return Err(FieldError::InvalidCoordinates);
        }
        Ok(FElem(
            coords
                .iter()
                .zip(t.powers_of_p.iter())
                .map(|(&c, &w)| c * w)
                .sum(),
        ))
    }

    /// Looks up an element by its canonical index.
    pub fn element(&self, index: u32) -> Option<FElem> {
        (index < self.inner.q).then_some(FElem(index))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FElem {
        FElem(n.rem_euclid(self.inner.p as i64) as u32)
    }

    /// The integer in `[0, p)` representing a prime-subfield element.
    pub fn prime_value(&self, a: FElem) -> Option<u32> {
        (a.0 < self.inner.p).then_some(a.0)
    }

    pub fn in_prime_field(&self, a: FElem) -> bool {
        a.0 < self.inner.p
    }

    #[inline]
    pub fn add(&self, a: FElem, b: FElem) -> FElem {
        let t = &*self.inner;
        if let Some(table) = &t.add {
            return FElem(table[(a.0 * t.q + b.0) as usize]);
        }
        let da = t.digits[a.0 as usize];
        let db = t.digits[b.0 as usize];
        let mut idx = 0;
        for k in 0..t.h as usize {
            idx += (da[k] + db[k]) % t.p * t.powers_of_p[k];
        }
        FElem(idx)
    }

    #[inline]
    pub fn neg(&self, a: FElem) -> FElem {
        FElem(self.inner.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FElem, b: FElem) -> FElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FElem, b: FElem) -> FElem {
        if a.0 == 0 || b.0 == 0 {
            return FElem::ZERO;
        }
        let t = &*self.inner;
        FElem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
    }

    /// `a + b * c`, the inner step of elimination and Horner evaluation.
    #[inline]
    pub fn mul_add(&self, a: FElem, b: FElem, c: FElem) -> FElem {
        self.add(a, self.mul(b, c))
    }

    pub fn inv(&self, a: FElem) -> Option<FElem> {
        if a.is_zero() {
            return None;
        }
        let t = &*self.inner;
        let order = t.q - 1;
        let l = t.log[a.0 as usize];
        Some(FElem(t.exp[((order - l) % order) as usize]))
    }

    /// `a / b`; panics on division by zero.
    pub fn div(&self, a: FElem, b: FElem) -> FElem {
        self.mul(a, self.inv(b).expect("division by zero in field"))
    }

    pub fn pow(&self, a: FElem, e: u64) -> FElem {
        if e == 0 {
            return FElem::ONE;
        }
        if a.is_zero() {
            return FElem::ZERO;
        }
        let t = &*self.inner;
        let order = (t.q - 1) as u64;
        let l = (t.log[a.0 as usize] as u64 * (e % order)) % order;
        FElem(t.exp[l as usize])
    }

    /// `a^e` for a possibly negative exponent; `None` for `0^e` with `e < 0`.
    pub fn pow_signed(&self, a: FElem, e: i64) -> Option<FElem> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            self.inv(a).map(|ia| self.pow(ia, e.unsigned_abs()))
        }
    }

    /// Frobenius `a -> a^p`.
    #[inline]
    pub fn frobenius(&self, a: FElem) -> FElem {
        FElem(self.inner.frob[a.0 as usize])
    }

    /// Absolute trace `a + a^p + ... + a^{p^{h-1}}`.
    pub fn trace(&self, a: FElem) -> FElem {
        let mut acc = a;
        let mut conj = a;
        for _ in 1..self.inner.h {
            conj = self.frobenius(conj);
            acc = self.add(acc, conj);
        }
        acc
    }

    /// Absolute norm `a * a^p * ... * a^{p^{h-1}}`.
    pub fn norm(&self, a: FElem) -> FElem {
        let mut acc = a;
        let mut conj = a;
        for _ in 1..self.inner.h {
            conj = self.frobenius(conj);
            acc = self.mul(acc, conj);
        }
        acc
    }

    /// All `y` with `y^p - y = c`, sorted. Empty iff `Tr(c) != 0`; otherwise
    /// exactly `p` elements forming one coset of the prime field.
    pub fn artin_schreier_roots(&self, c: FElem) -> Vec<FElem> {
        let root = self.inner.as_root[c.0 as usize];
        if root == NO_ROOT {
            return Vec::new();
        }
        let mut roots: Vec<FElem> = (0..self.inner.p)
            .map(|delta| self.add(FElem(root), FElem(delta)))
            .collect();
        roots.sort_unstable();
        roots
    }

    /// Smallest element (canonical order) whose trace is nonzero.
    pub fn first_nonzero_trace(&self) -> FElem {
        self.elements()
            .find(|&a| !self.trace(a).is_zero())
            .expect("trace is surjective")
    }
}

/// Univariate polynomial over a field, ascending coefficients, no trailing
/// zeros. The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<FElem>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<FElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[FElem] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> FElem {
        self.coeffs.get(i).copied().unwrap_or(FElem::ZERO)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, ctx: &FieldCtx, x: FElem) -> FElem {
        self.coeffs
            .iter()
            .rev()
            .fold(FElem::ZERO, |acc, &c| ctx.mul_add(c, acc, x))
    }
}

/// Lagrange interpolation through the first `degree_bound + 1` samples.
///
/// Any further samples are checked against the result. All abscissae must be
/// distinct.
pub fn interpolate_univariate(
    ctx: &FieldCtx,
    samples: &[(FElem, FElem)],
    degree_bound: usize,
) -> Result<UniPoly, FieldError> {
    let m = degree_bound + 1;
    if samples.len() < m {
        return Err(FieldError::NotEnoughSamples {
            needed: m,
            got: samples.len(),
        });
    }
    let mut seen = vec![false; ctx.size() as usize];
    for &(x, _) in samples {
        if core::mem::replace(&mut seen[x.index() as usize], true) {
            return Err(FieldError::DuplicateNode);
        }
    }
    let nodes = &samples[..m];

    // master(x) = prod (x - x_j), degree m, ascending coefficients.
    let mut master = vec![FElem::ZERO; m + 1];
    master[0] = FElem::ONE;
    for (deg, &(xj, _)) in nodes.iter().enumerate() {
        let neg_xj = ctx.neg(xj);
        for k in (0..=deg + 1).rev() {
            let shifted = if k > 0 { master[k - 1] } else { FElem::ZERO };
            master[k] = ctx.mul_add(shifted, master[k], neg_xj);
        }
    }

    let mut result = vec![FElem::ZERO; m];
    let mut basis = vec![FElem::ZERO; m];
    for (i, &(xi, yi)) in nodes.iter().enumerate() {
        // basis = master / (x - x_i) by synthetic division.
        let mut carry = FElem::ZERO;
        for k in (0..m).rev() {
            carry = ctx.mul_add(master[k + 1], carry, xi);
            basis[k] = carry;
        }
        let mut denom = FElem::ONE;
        for (j, &(xj, _)) in nodes.iter().enumerate() {
            if j != i {
                denom = ctx.mul(denom, ctx.sub(xi, xj));
            }
        }
        let scale = ctx.div(yi, denom);
        for (r, &b) in result.iter_mut().zip(basis.iter()) {
            *r = ctx.mul_add(*r, scale, b);
        }
    }
    let poly = UniPoly::new(result);
    for &(x, y) in &samples[m..] {
        if poly.eval(ctx, x) != y {
            return Err(FieldError::InconsistentSamples);
        }
    }
    Ok(poly)
}
