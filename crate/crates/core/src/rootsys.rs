//! Root systems, Weyl groups and the twisted (dot) action.
//!
//! Everything lives in the simple-root basis of the root lattice `Λ`. The
//! invariant form is normalized so that short roots have squared length 1;
//! consequently `2⟨α, β⟩` is an integer for all roots and is what we store.
//! Fundamental weights never appear explicitly: the strongly dominant weight
//! `θ = Σ (l_i + 1) ω_i` only enters through `σ_i • λ = σ_i λ + (l_i + 1) α_i`.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported rank. Weights are stored inline, zero padded.
pub const MAX_RANK: usize = 8;

/// Default ceiling on `|W|` for enumeration (admits E6, refuses E7/E8).
pub const DEFAULT_WEYL_BUDGET: u64 = 60_000;

/// An element `Σ k_i α_i` of the root lattice, stored by its coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Weight([i32; MAX_RANK]);

impl Weight {
    pub const ZERO: Weight = Weight([0; MAX_RANK]);

    pub fn new(coords: &[i32]) -> Self {
        assert!(coords.len() <= MAX_RANK, "rank {} exceeds MAX_RANK", coords.len());
        let mut w = [0; MAX_RANK];
        w[..coords.len()].copy_from_slice(coords);
        Weight(w)
    }

    /// The simple root `α_i` (0-based index).
    pub fn unit(i: usize) -> Self {
        let mut w = Weight::ZERO;
        w.0[i] = 1;
        w
    }

    #[inline]
    pub fn get(&self, i: usize) -> i32 {
        self.0[i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: i32) {
        self.0[i] = v;
    }

    pub fn coords(&self, rank: usize) -> &[i32] {
        &self.0[..rank]
    }

    /// The height `d(λ) = Σ k_i`.
    #[inline]
    pub fn height(&self) -> i32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// `λ ⪰ 0`: all coordinates nonnegative.
    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// First nonzero coordinate is positive.
    pub fn is_lex_positive(&self) -> bool {
        self.0.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
    }

    pub fn scale(&self, k: i32) -> Self {
        let mut w = *self;
        for c in w.0.iter_mut() {
            *c *= k;
        }
        w
    }

    pub fn display(&self, rank: usize) -> String {
        let parts: Vec<String> = self.coords(rank).iter().map(|c| c.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&c| c != 0).map_or(1, |p| p + 1);
        write!(f, "{:?}", &self.0[..last])
    }
}

impl Add for Weight {
    type Output = Weight;
    #[inline]
    fn add(mut self, rhs: Weight) -> Weight {
        self += rhs;
        self
    }
}

impl AddAssign for Weight {
    #[inline]
    fn add_assign(&mut self, rhs: Weight) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl Sub for Weight {
    type Output = Weight;
    #[inline]
    fn sub(mut self, rhs: Weight) -> Weight {
        self -= rhs;
        self
    }
}

impl SubAssign for Weight {
    #[inline]
    fn sub_assign(&mut self, rhs: Weight) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        self.scale(-1)
    }
}

/// `(k)_m`, the least nonnegative residue of `k` modulo `m`.
#[inline]
pub fn residue(k: i64, m: i64) -> i64 {
    k.rem_euclid(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl CartanType {
    fn from_letter(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => CartanType::A,
            'B' => CartanType::B,
            'C' => CartanType::C,
            'D' => CartanType::D,
            'E' => CartanType::E,
            'F' => CartanType::F,
            'G' => CartanType::G,
            _ => return None,
        })
    }

    fn letter(self) -> char {
        match self {
            CartanType::A => 'A',
            CartanType::B => 'B',
            CartanType::C => 'C',
            CartanType::D => 'D',
            CartanType::E => 'E',
            CartanType::F => 'F',
            CartanType::G => 'G',
        }
    }
}

/// One irreducible factor of a (possibly reducible) root system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub cartan_type: CartanType,
    pub rank: usize,
}

impl Component {
    fn validate(self) -> std::result::Result<(), String> {
        let r = self.rank;
        let ok = match self.cartan_type {
            CartanType::A => r >= 1,
            CartanType::B | CartanType::C => r >= 2,
            CartanType::D => r >= 4,
            CartanType::E => (6..=8).contains(&r),
            CartanType::F => r == 4,
            CartanType::G => r == 2,
        };
        if ok {
            Ok(())
        } else {
            Err(format!(
                "{}{} is not an irreducible reduced root system",
                self.cartan_type.letter(),
                r
            ))
        }
    }

    fn weyl_order(self) -> u64 {
        let r = self.rank as u64;
        let fact = |k: u64| (1..=k).product::<u64>();
        match self.cartan_type {
            CartanType::A => fact(r + 1),
            CartanType::B | CartanType::C => (1u64 << r) * fact(r),
            CartanType::D => (1u64 << (r - 1)) * fact(r),
            CartanType::E => match r {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            CartanType::F => 1152,
            CartanType::G => 12,
        }
    }

    /// Doubled Gram matrix `2⟨α_i, α_j⟩` in Bourbaki numbering, short roots of length 1.
    fn gram2(self) -> Vec<Vec<i32>> {
        let r = self.rank;
        let mut g = vec![vec![0; r]; r];
        let link = |g: &mut Vec<Vec<i32>>, i: usize, j: usize, v: i32| {
            g[i][j] = v;
            g[j][i] = v;
        };
        match self.cartan_type {
            CartanType::A => {
                for i in 0..r {
                    g[i][i] = 2;
                }
                for i in 0..r.saturating_sub(1) {
                    link(&mut g, i, i + 1, -1);
                }
            }
            CartanType::B => {
                for i in 0..r - 1 {
                    g[i][i] = 4;
                }
                g[r - 1][r - 1] = 2;
                for i in 0..r - 1 {
                    link(&mut g, i, i + 1, -2);
                }
            }
            CartanType::C => {
                for i in 0..r - 1 {
                    g[i][i] = 2;
                }
                g[r - 1][r - 1] = 4;
                for i in 0..r - 2 {
                    link(&mut g, i, i + 1, -1);
                }
                link(&mut g, r - 2, r - 1, -2);
            }
            CartanType::D => {
                for i in 0..r {
                    g[i][i] = 2;
                }
                for i in 0..r - 2 {
                    link(&mut g, i, i + 1, -1);
                }
                link(&mut g, r - 3, r - 1, -1);
            }
            CartanType::E => {
                for i in 0..r {
                    g[i][i] = 2;
                }
                // 1-3-4-5-6(-7-8) with 2 attached to 4 (1-based Bourbaki labels).
                link(&mut g, 0, 2, -1);
                link(&mut g, 1, 3, -1);
                for i in 2..r - 1 {
                    link(&mut g, i, i + 1, -1);
                }
            }
            CartanType::F => {
                g[0][0] = 4;
                g[1][1] = 4;
                g[2][2] = 2;
                g[3][3] = 2;
                link(&mut g, 0, 1, -2);
                link(&mut g, 1, 2, -2);
                link(&mut g, 2, 3, -1);
            }
            CartanType::G => {
                g[0][0] = 2;
                g[1][1] = 6;
                link(&mut g, 0, 1, -3);
            }
        }
        g
    }
}

/// Twisting parameter `ℓ = (l_1, …, l_r)`, standing for `θ = Σ (l_i + 1) ω_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwistParams {
    pub ell: Vec<u32>,
}

impl TwistParams {
    pub fn new(ell: Vec<u32>) -> Self {
        TwistParams { ell }
    }

    pub fn zero(rank: usize) -> Self {
        TwistParams { ell: vec![0; rank] }
    }

    #[inline]
    pub fn l(&self, i: usize) -> i64 {
        self.ell[i] as i64
    }

    pub fn is_zero(&self) -> bool {
        self.ell.iter().all(|&l| l == 0)
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    code: String,
    components: Vec<Component>,
    rank: usize,
    n: u32,
    cartan: Vec<Vec<i32>>,
    gram2: Vec<Vec<i32>>,
    pos_roots: Vec<Weight>,
    root_len_sq: Vec<i32>,
    root_m: Vec<u32>,
}

impl RootSystem {
    /// Builds an irreducible root system of the given type and rank with series degree `n`.
    pub fn build(cartan_type: CartanType, rank: usize, n: u32) -> Result<Self> {
        Self::from_components(vec![Component { cartan_type, rank }], n)
    }

    /// Parses codes such as `"A2"`, `"G2"`, `"B3"` or the reducible `"A1xA1"`.
    pub fn from_code(code: &str, n: u32) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidRootSystem {
            code: code.to_string(),
            reason,
        };
        let mut comps = Vec::new();
        for part in code.split(['x', 'X', '*']) {
            let part = part.trim();
            let mut chars = part.chars();
            let letter = chars
                .next()
                .ok_or_else(|| invalid("empty component".into()))?;
            let ty = CartanType::from_letter(letter)
                .ok_or_else(|| invalid(format!("unknown Cartan type `{letter}`")))?;
            let rank: usize = chars
                .as_str()
                .parse()
                .map_err(|_| invalid(format!("bad rank in `{part}`")))?;
            comps.push(Component {
                cartan_type: ty,
                rank,
            });
        }
        Self::from_components(comps, n)
    }

    pub fn from_components(components: Vec<Component>, n: u32) -> Result<Self> {
        let code: String = components
            .iter()
            .map(|c| format!("{}{}", c.cartan_type.letter(), c.rank))
            .collect::<Vec<_>>()
            .join("x");
        if components.is_empty() {
            return Err(Error::InvalidRootSystem {
                code,
                reason: "no components".into(),
            });
        }
        if n == 0 {
            return Err(Error::InvalidParameter("series degree n must be >= 1".into()));
        }
        for c in &components {
            c.validate().map_err(|reason| Error::InvalidRootSystem {
                code: code.clone(),
                reason,
            })?;
        }
        let rank: usize = components.iter().map(|c| c.rank).sum();
        if rank > MAX_RANK {
            return Err(Error::InvalidRootSystem {
                code,
                reason: format!("rank {rank} exceeds the supported maximum {MAX_RANK}"),
            });
        }

        let mut gram2 = vec![vec![0; rank]; rank];
        let mut offset = 0;
        for c in &components {
            let g = c.gram2();
            for i in 0..c.rank {
                for j in 0..c.rank {
                    gram2[offset + i][offset + j] = g[i][j];
                }
            }
            offset += c.rank;
        }
        let cartan: Vec<Vec<i32>> = (0..rank)
            .map(|i| (0..rank).map(|j| 2 * gram2[i][j] / gram2[j][j]).collect())
            .collect();

        let mut rs = RootSystem {
            code,
            components,
            rank,
            n,
            cartan,
            gram2,
            pos_roots: Vec::new(),
            root_len_sq: Vec::new(),
            root_m: Vec::new(),
        };
        rs.pos_roots = rs.generate_positive_roots();
        rs.root_len_sq = rs.pos_roots.iter().map(|a| rs.norm_sq(a)).collect();
        rs.root_m = rs.root_len_sq.iter().map(|&l| rs.m_of_len(l)).collect();
        Ok(rs)
    }

    fn generate_positive_roots(&self) -> Vec<Weight> {
        let mut seen: FxHashMap<Weight, ()> = FxHashMap::default();
        let mut queue: Vec<Weight> = (0..self.rank).map(Weight::unit).collect();
        for w in &queue {
            seen.insert(*w, ());
        }
        let mut head = 0;
        while head < queue.len() {
            let beta = queue[head];
            head += 1;
            for j in 0..self.rank {
                let img = self.reflect(j, &beta);
                if img.is_nonneg() && !img.is_zero() && !seen.contains_key(&img) {
                    seen.insert(img, ());
                    queue.push(img);
                }
            }
        }
        queue.sort_by_key(|w| (w.height(), std::cmp::Reverse(*w)));
        queue
    }

    pub fn code(&self) -> &str {
        &self.code
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Same root datum with a different series degree.
    pub fn with_n(&self, n: u32) -> Result<Self> {
        Self::from_components(self.components.clone(), n)
    }

    /// Cartan integer `c(i,j) = 2⟨α_i,α_j⟩/⟨α_j,α_j⟩` (0-based).
    #[inline]
    pub fn cartan(&self, i: usize, j: usize) -> i32 {
        self.cartan[i][j]
    }

    /// `2⟨α_i, α_j⟩`.
    #[inline]
    pub fn gram2(&self, i: usize, j: usize) -> i32 {
        self.gram2[i][j]
    }

    pub fn pos_roots(&self) -> &[Weight] {
        &self.pos_roots
    }

    pub fn root_len_sq(&self, idx: usize) -> i32 {
        self.root_len_sq[idx]
    }

    pub fn root_m(&self, idx: usize) -> u32 {
        self.root_m[idx]
    }

    /// `∥α_i∥²` for a simple root.
    #[inline]
    pub fn simple_len_sq(&self, i: usize) -> i32 {
        self.gram2[i][i] / 2
    }

    /// `m(α_i)` for a simple root.
    #[inline]
    pub fn simple_m(&self, i: usize) -> u32 {
        self.m_of_len(self.simple_len_sq(i))
    }

    /// `m(α) = n / gcd(n, ∥α∥²)`.
    pub fn m_of_len(&self, len_sq: i32) -> u32 {
        self.n / num_integer::gcd(self.n, len_sq as u32)
    }

    /// `∥λ∥² = ½ Σ λ_a λ_b 2⟨α_a,α_b⟩`.
    pub fn norm_sq(&self, lam: &Weight) -> i32 {
        let mut s = 0;
        for a in 0..self.rank {
            for b in 0..self.rank {
                s += lam.get(a) * lam.get(b) * self.gram2[a][b];
            }
        }
        s / 2
    }

    /// `⟨λ, α_j^∨⟩ = Σ_i λ_i c(i, j)`.
    #[inline]
    pub fn coroot_pairing(&self, lam: &Weight, j: usize) -> i32 {
        (0..self.rank).map(|i| lam.get(i) * self.cartan[i][j]).sum()
    }

    /// Simple reflection `σ_j λ = λ − ⟨λ, α_j^∨⟩ α_j`.
    #[inline]
    pub fn reflect(&self, j: usize, lam: &Weight) -> Weight {
        let mut out = *lam;
        out.0[j] -= self.coroot_pairing(lam, j);
        out
    }

    /// `σ_i • λ = σ_i λ + (l_i + 1) α_i`.
    #[inline]
    pub fn dot_reflect(&self, i: usize, lam: &Weight, tp: &TwistParams) -> Weight {
        let mut out = self.reflect(i, lam);
        out.0[i] += tp.ell[i] as i32 + 1;
        out
    }

    /// The Coxeter exponent `r(i, j)` with `(σ_i σ_j)^{r(i,j)} = 1`.
    pub fn coxeter_order(&self, i: usize, j: usize) -> u32 {
        if i == j {
            return 1;
        }
        match self.cartan[i][j] * self.cartan[j][i] {
            0 => 2,
            1 => 3,
            2 => 4,
            3 => 6,
            p => unreachable!("Cartan product {p} in a finite root system"),
        }
    }

    /// Sum of positive roots, `2ρ`; a regular element of the root lattice.
    pub fn two_rho(&self) -> Weight {
        self.pos_roots.iter().fold(Weight::ZERO, |acc, a| acc + *a)
    }

    pub fn weyl_order(&self) -> u64 {
        self.components.iter().map(|c| c.weyl_order()).product()
    }

    /// Index of a positive root, if `beta` is one.
    pub fn pos_root_index(&self, beta: &Weight) -> Option<usize> {
        self.pos_roots.iter().position(|a| a == beta)
    }

    /// Nodes `i`, `j` are orthogonal.
    pub fn orthogonal(&self, i: usize, j: usize) -> bool {
        self.cartan[i][j] == 0
    }
}

/// An element of `W`, carried with a lexicographically minimal reduced word.
#[derive(Clone, PartialEq, Eq)]
pub struct WeylElement {
    word: Vec<u8>,
    rank: usize,
    /// Column `a` holds `w(α_a)`; row-major `rank × rank`.
    matrix: Vec<i32>,
    inverse: Vec<i32>,
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylElement{:?}", self.word)
    }
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        let mut m = vec![0; rank * rank];
        for i in 0..rank {
            m[i * rank + i] = 1;
        }
        WeylElement {
            word: Vec::new(),
            rank,
            matrix: m.clone(),
            inverse: m,
        }
    }

    fn simple_matrix(rs: &RootSystem, j: usize) -> Vec<i32> {
        let r = rs.rank;
        let mut m = vec![0; r * r];
        for a in 0..r {
            m[a * r + a] = 1;
            m[j * r + a] -= rs.cartan(a, j);
        }
        m
    }

    fn matmul(r: usize, x: &[i32], y: &[i32]) -> Vec<i32> {
        let mut out = vec![0; r * r];
        for i in 0..r {
            for k in 0..r {
                let xik = x[i * r + k];
                if xik == 0 {
                    continue;
                }
                for j in 0..r {
                    out[i * r + j] += xik * y[k * r + j];
                }
            }
        }
        out
    }

    /// Element of `W` represented by an arbitrary word (not necessarily reduced).
    pub fn from_word(rs: &RootSystem, word: &[u8]) -> Self {
        word.iter()
            .fold(WeylElement::identity(rs.rank), |w, &i| w.times_simple(rs, i))
    }

    /// Right multiplication `w σ_i`; the stored word becomes `word · i`.
    pub fn times_simple(&self, rs: &RootSystem, i: u8) -> Self {
        let s = Self::simple_matrix(rs, i as usize);
        let mut word = self.word.clone();
        word.push(i);
        WeylElement {
            word,
            rank: self.rank,
            matrix: Self::matmul(self.rank, &self.matrix, &s),
            inverse: Self::matmul(self.rank, &s, &self.inverse),
        }
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn sign(&self) -> i32 {
        if self.word.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn matrix(&self) -> &[i32] {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == WeylElement::identity(self.rank).matrix
    }

    fn apply_matrix(r: usize, m: &[i32], lam: &Weight) -> Weight {
        let mut out = Weight::ZERO;
        for b in 0..r {
            let mut s = 0;
            for a in 0..r {
                s += m[b * r + a] * lam.get(a);
            }
            out.set(b, s);
        }
        out
    }

    /// `w λ`.
    #[inline]
    pub fn apply(&self, lam: &Weight) -> Weight {
        Self::apply_matrix(self.rank, &self.matrix, lam)
    }

    /// `w⁻¹ λ`.
    #[inline]
    pub fn apply_inverse(&self, lam: &Weight) -> Weight {
        Self::apply_matrix(self.rank, &self.inverse, lam)
    }

    pub fn inverse_word(&self) -> Vec<u8> {
        self.word.iter().rev().copied().collect()
    }
}

/// `W` enumerated in canonical order: by length, then by lexicographically
/// minimal reduced word. The identity comes first.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
    index: FxHashMap<Weight, usize>,
    two_rho: Weight,
}

impl WeylGroup {
    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, idx: usize) -> &WeylElement {
        &self.elements[idx]
    }

    /// Canonical index of the element `w`, however it was constructed.
    pub fn index_of(&self, w: &WeylElement) -> usize {
        self.index[&w.apply(&self.two_rho)]
    }

    /// Index of the product `w_a w_b`.
    pub fn multiply(&self, rs: &RootSystem, a: usize, b: usize) -> usize {
        let mut word = self.elements[a].word.clone();
        word.extend_from_slice(&self.elements[b].word);
        self.index_of(&WeylElement::from_word(rs, &word))
    }

    /// Index of the longest element.
    pub fn longest(&self) -> usize {
        self.elements.len() - 1
    }

    /// Index of the parent `w σ_last` along the canonical word, for non-identity `w`.
    pub fn parent(&self, idx: usize) -> Option<(usize, u8)> {
        let (&last, prefix) = self.elements[idx].word.split_last()?;
        // Canonical words are prefix-closed, so the prefix is itself canonical.
        let pos = self
            .elements
            .binary_search_by(|e| {
                e.word
                    .len()
                    .cmp(&prefix.len())
                    .then_with(|| e.word.as_slice().cmp(prefix))
            })
            .expect("canonical words are prefix-closed");
        Some((pos, last))
    }
}

/// Enumerates `W` by breadth-first closure under right multiplication.
pub fn weyl_enumerate(rs: &RootSystem, budget: u64) -> Result<WeylGroup> {
    let order = rs.weyl_order();
    if order > budget {
        return Err(Error::BudgetExceeded { order, budget });
    }
    let two_rho = rs.two_rho();
    let mut elements = vec![WeylElement::identity(rs.rank)];
    let mut index = FxHashMap::default();
    index.insert(two_rho, 0);
    let mut level_start = 0;
    while level_start < elements.len() {
        let level_end = elements.len();
        for idx in level_start..level_end {
            for i in 0..rs.rank {
                // ℓ(wσ_i) > ℓ(w) iff w(α_i) > 0.
                let col = elements[idx].apply(&Weight::unit(i));
                if !col.is_nonneg() {
                    continue;
                }
                let next = elements[idx].times_simple(rs, i as u8);
                let key = next.apply(&two_rho);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(key) {
                    e.insert(elements.len());
                    elements.push(next);
                }
            }
        }
        level_start = level_end;
    }
    debug_assert_eq!(elements.len() as u64, order);
    Ok(WeylGroup {
        elements,
        index,
        two_rho,
    })
}

/// `Φ(w) = {α > 0 : wα < 0}`.
pub fn inversion_set(w: &WeylElement, rs: &RootSystem) -> Vec<Weight> {
    rs.pos_roots()
        .iter()
        .filter(|a| !w.apply(a).is_nonneg())
        .copied()
        .collect()
}

/// Indices into `rs.pos_roots()` of the inversion set.
pub fn inversion_indices(w: &WeylElement, rs: &RootSystem) -> Vec<usize> {
    rs.pos_roots()
        .iter()
        .enumerate()
        .filter(|(_, a)| !w.apply(a).is_nonneg())
        .map(|(k, _)| k)
        .collect()
}

/// Every reduced word of `w`, sorted.
pub fn reduced_words(w: &WeylElement, rs: &RootSystem) -> Vec<Vec<u8>> {
    fn walk(w: &WeylElement, len: usize, rs: &RootSystem, out: &mut Vec<Vec<u8>>, suffix: &mut Vec<u8>) {
        if len == 0 {
            out.push(suffix.iter().rev().copied().collect());
            return;
        }
        for i in 0..rs.rank() {
            // ℓ(wσ_i) < ℓ(w) iff w(α_i) < 0
            if !w.apply(&Weight::unit(i)).is_nonneg() {
                suffix.push(i as u8);
                walk(&w.times_simple(rs, i as u8), len - 1, rs, out, suffix);
                suffix.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(w, inversion_indices(w, rs).len(), rs, &mut out, &mut Vec::new());
    out.sort();
    out
}

/// `w • λ = w(λ − θ) + θ`, evaluated through the generators.
pub fn dot_action(w: &WeylElement, lam: &Weight, tp: &TwistParams, rs: &RootSystem) -> Weight {
    w.word()
        .iter()
        .rev()
        .fold(*lam, |acc, &i| rs.dot_reflect(i as usize, &acc, tp))
}
