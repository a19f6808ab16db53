//! Generalized Gell-Mann bases of su(n) and their structure constants.
//!
//! Generators are normalized so that `Tr(t_i t_j) = 2 δ_ij`. They satisfy
//!
//! ```text
//! [t_i, t_j] = 2i Σ_k c_ijk t_k
//! {t_i, t_j} = (4/n) δ_ij 𝟙 + 2 Σ_k f_ijk t_k
//! ```
//!
//! Indices are 0-based throughout. For `n = 2` the basis is `(σ₁, σ₂, σ₃)`
//! and for `n = 3` it is the usual `(λ₁, …, λ₈)`, so generator `i` here is
//! the textbook generator `i + 1`.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::ComplexField;

use crate::error::{Error, Result};
use crate::linalg::{anticommutator, commutator, hermitian_deviation, max_abs_entry, trace_product};
use crate::scalar::{cplx, creal, CMatrix, Real};

/// Where a generator sits in the matrix algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    /// `E_jk + E_kj` with `row < col`.
    Symmetric { row: usize, col: usize },
    /// `-i E_jk + i E_kj` with `row < col`.
    Antisymmetric { row: usize, col: usize },
    /// `sqrt(2/(l(l+1))) diag(1, …, 1, -l, 0, …, 0)` with `l` leading ones.
    Diagonal { level: usize },
    /// Supplied from outside and not recognised as one of the above.
    Other,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorBasis<T: Real> {
    dimension: usize,
    generators: Vec<CMatrix<T>>,
    kinds: Vec<GeneratorKind>,
    diagonal_indices: Vec<usize>,
    offdiagonal_indices: Vec<usize>,
}

fn symmetric<T: Real>(n: usize, row: usize, col: usize) -> CMatrix<T> {
    let mut m = CMatrix::zeros(n, n);
    m[(row, col)] = creal(T::one());
    m[(col, row)] = creal(T::one());
    m
}

fn antisymmetric<T: Real>(n: usize, row: usize, col: usize) -> CMatrix<T> {
    let mut m = CMatrix::zeros(n, n);
    m[(row, col)] = cplx(T::zero(), -T::one());
    m[(col, row)] = cplx(T::zero(), T::one());
    m
}

fn diagonal_generator<T: Real>(n: usize, level: usize) -> CMatrix<T> {
    let l = level as f64;
    let scale = T::lit((2.0 / (l * (l + 1.0))).sqrt());
    let mut m = CMatrix::zeros(n, n);
    for i in 0..level {
        m[(i, i)] = creal(scale);
    }
    m[(level, level)] = creal(-scale * T::lit(l));
    m
}

/// Generator ordering. `n ≤ 3` interleaves so that the Pauli and Gell-Mann
/// labels come out verbatim; larger `n` lists all off-diagonal pairs in
/// lexicographic `(row, col)` order, then the diagonal generators.
fn ordering(n: usize) -> Vec<GeneratorKind> {
    use GeneratorKind::*;
    if n == 3 {
        return vec![
            Symmetric { row: 0, col: 1 },
            Antisymmetric { row: 0, col: 1 },
            Diagonal { level: 1 },
            Symmetric { row: 0, col: 2 },
            Antisymmetric { row: 0, col: 2 },
            Symmetric { row: 1, col: 2 },
            Antisymmetric { row: 1, col: 2 },
            Diagonal { level: 2 },
        ];
    }
    let mut kinds = Vec::with_capacity(n * n - 1);
    for row in 0..n {
        for col in row + 1..n {
            kinds.push(Symmetric { row, col });
            kinds.push(Antisymmetric { row, col });
        }
    }
    kinds.extend((1..n).map(|level| Diagonal { level }));
    kinds
}

fn is_diagonal<T: Real>(m: &CMatrix<T>, tol: T) -> bool {
    let n = m.nrows();
    (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)].modulus() <= tol))
}

fn classify<T: Real>(m: &CMatrix<T>, tol: T) -> GeneratorKind {
    let n = m.nrows();
    if is_diagonal(m, tol) {
        return GeneratorKind::Other;
    }
    for row in 0..n {
        for col in row + 1..n {
            let z = m[(row, col)];
            if z.modulus() > tol {
                return if z.im.abs() <= tol {
                    GeneratorKind::Symmetric { row, col }
                } else if z.re.abs() <= tol {
                    GeneratorKind::Antisymmetric { row, col }
                } else {
                    GeneratorKind::Other
                };
            }
        }
    }
    GeneratorKind::Other
}

impl<T: Real> GeneratorBasis<T> {
    /// Builds the generalized Gell-Mann basis of su(n).
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        let kinds = ordering(n);
        let generators = kinds
            .iter()
            .map(|kind| match *kind {
                GeneratorKind::Symmetric { row, col } => symmetric(n, row, col),
                GeneratorKind::Antisymmetric { row, col } => antisymmetric(n, row, col),
                GeneratorKind::Diagonal { level } => diagonal_generator(n, level),
                GeneratorKind::Other => unreachable!(),
            })
            .collect();
        Ok(Self::assemble(n, generators, kinds))
    }

    /// Wraps an externally supplied generator list without checking the
    /// basis invariants; use [`verify_basis`] for that. Diagonal generators
    /// are detected from the matrices themselves.
    pub fn from_generators(n: usize, generators: Vec<CMatrix<T>>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        if generators.len() != n * n - 1 {
            return Err(Error::DimensionMismatch { expected: n * n - 1, found: generators.len() });
        }
        if let Some(g) = generators.iter().find(|g| g.nrows() != n || g.ncols() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: g.nrows().max(g.ncols()) });
        }
        let tol = T::lit(1e-12);
        let mut level = 0;
        let kinds = generators
            .iter()
            .map(|g| {
                if is_diagonal(g, tol) {
                    level += 1;
                    GeneratorKind::Diagonal { level }
                } else {
                    classify(g, tol)
                }
            })
            .collect();
        Ok(Self::assemble(n, generators, kinds))
    }

    fn assemble(n: usize, generators: Vec<CMatrix<T>>, kinds: Vec<GeneratorKind>) -> Self {
        let (diagonal_indices, offdiagonal_indices) = (0..generators.len())
            .partition(|&i| matches!(kinds[i], GeneratorKind::Diagonal { .. }));
        Self { dimension: n, generators, kinds, diagonal_indices, offdiagonal_indices }
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of traceless generators, `n² - 1`.
    #[inline]
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    #[inline]
    pub fn generator(&self, i: usize) -> &CMatrix<T> {
        &self.generators[i]
    }

    pub fn generators(&self) -> &[CMatrix<T>] {
        &self.generators
    }

    /// Index map: what each generator is.
    pub fn kinds(&self) -> &[GeneratorKind] {
        &self.kinds
    }

    pub fn index_of(&self, kind: GeneratorKind) -> Option<usize> {
        self.kinds.iter().position(|&k| k == kind)
    }

    pub fn diagonal_indices(&self) -> &[usize] {
        &self.diagonal_indices
    }

    pub fn offdiagonal_indices(&self) -> &[usize] {
        &self.offdiagonal_indices
    }

    pub fn is_diagonal_index(&self, i: usize) -> bool {
        matches!(self.kinds[i], GeneratorKind::Diagonal { .. })
    }

    /// Coefficients `(Tr(X)/n, [Tr(X t_k)/2])`. The coefficients are real
    /// parts; for Hermitian `X` the imaginary parts vanish.
    pub fn coefficients(&self, x: &CMatrix<T>) -> (T, Vec<T>) {
        let n = T::lit(self.dimension as f64);
        let identity = x.trace().re / n;
        let half = T::lit(0.5);
        let coeffs = self.generators.iter().map(|t| trace_product(x, t).re * half).collect();
        (identity, coeffs)
    }

    /// `identity 𝟙 + Σ_k coeffs[k] t_k`.
    pub fn reconstruct(&self, identity: T, coeffs: &[T]) -> CMatrix<T> {
        let n = self.dimension;
        let mut m = CMatrix::<T>::identity(n, n).map(|z| z * identity);
        for (t, &a) in self.generators.iter().zip(coeffs) {
            if a != T::zero() {
                m += t.map(|z| z * a);
            }
        }
        m
    }
}

/// Storage key for a triple, sorted ascending.
pub type Triple = [usize; 3];

fn sort_with_parity(mut t: Triple) -> (Triple, bool) {
    let mut odd = false;
    for i in 0..3 {
        for j in 0..2 - i {
            if t[j] > t[j + 1] {
                t.swap(j, j + 1);
                odd = !odd;
            }
        }
    }
    (t, odd)
}

/// Totally antisymmetric `c` and totally symmetric `f` tensors, stored
/// sparsely by their sorted index triple.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants<T: Real> {
    dimension: usize,
    c: BTreeMap<Triple, T>,
    f: BTreeMap<Triple, T>,
}

impl<T: Real> StructureConstants<T> {
    /// `c_ijk = Tr([t_i,t_j] t_k) / 4i`, `f_ijk = Tr({t_i,t_j} t_k) / 4`.
    /// Entries below `1e-12` in magnitude are not stored.
    pub fn compute(basis: &GeneratorBasis<T>) -> Self {
        let drop = T::lit(1e-12).max(T::default_epsilon() * T::lit(64.0));
        let quarter = T::lit(0.25);
        let m = basis.len();
        let t = basis.generators();
        let mut c = BTreeMap::new();
        let mut f = BTreeMap::new();
        for i in 0..m {
            for j in i..m {
                let comm = commutator(&t[i], &t[j]);
                let anti = anticommutator(&t[i], &t[j]);
                for k in j..m {
                    if i < j && j < k {
                        let value = trace_product(&comm, &t[k]).im * quarter;
                        if value.abs() > drop {
                            c.insert([i, j, k], value);
                        }
                    }
                    let value = trace_product(&anti, &t[k]).re * quarter;
                    if value.abs() > drop {
                        f.insert([i, j, k], value);
                    }
                }
            }
        }
        Self { dimension: basis.dimension(), c, f }
    }

    /// Builds the tensors from listed entries in any index order. Each entry
    /// is canonicalized; conflicting duplicates and repeated indices in `c`
    /// are rejected.
    pub fn from_entries(
        dimension: usize,
        c_entries: impl IntoIterator<Item = (Triple, T)>,
        f_entries: impl IntoIterator<Item = (Triple, T)>,
    ) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::InvalidDimension(dimension));
        }
        let m = dimension * dimension - 1;
        let tol = T::lit(1e-12);
        let mut c = BTreeMap::new();
        let mut f = BTreeMap::new();
        for (idx, value) in c_entries {
            check_range(idx, m)?;
            let (key, odd) = sort_with_parity(idx);
            if key[0] == key[1] || key[1] == key[2] {
                if value.abs() > tol {
                    return Err(Error::InvalidInput(format!("c{idx:?} has repeated indices")));
                }
                continue;
            }
            let value = if odd { -value } else { value };
            insert_consistent(&mut c, key, value, tol, "c")?;
        }
        for (idx, value) in f_entries {
            check_range(idx, m)?;
            let (key, _) = sort_with_parity(idx);
            insert_consistent(&mut f, key, value, tol, "f")?;
        }
        Ok(Self { dimension, c, f })
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// `c_ijk` for any index order.
    pub fn c(&self, i: usize, j: usize, k: usize) -> T {
        let (key, odd) = sort_with_parity([i, j, k]);
        match self.c.get(&key) {
            Some(&v) if odd => -v,
            Some(&v) => v,
            None => T::zero(),
        }
    }

    /// `f_ijk` for any index order.
    pub fn f(&self, i: usize, j: usize, k: usize) -> T {
        let (key, _) = sort_with_parity([i, j, k]);
        self.f.get(&key).copied().unwrap_or_else(T::zero)
    }

    /// Stored entries with `i < j < k`.
    pub fn c_entries(&self) -> impl Iterator<Item = (Triple, T)> + '_ {
        self.c.iter().map(|(k, v)| (*k, *v))
    }

    /// Stored entries with `i ≤ j ≤ k`.
    pub fn f_entries(&self) -> impl Iterator<Item = (Triple, T)> + '_ {
        self.f.iter().map(|(k, v)| (*k, *v))
    }

    /// Every index permutation of the stored `f` entries, once each.
    pub fn f_permuted(&self) -> impl Iterator<Item = (Triple, T)> + '_ {
        self.f.iter().flat_map(|(&[a, b, c], &v)| {
            let mut perms = vec![[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]];
            perms.sort_unstable();
            perms.dedup();
            perms.into_iter().map(move |p| (p, v))
        })
    }

    /// Dense `c` as a flat `m³` array indexed `(i*m + j)*m + k`.
    pub fn dense_c(&self) -> Vec<T> {
        let m = self.dimension * self.dimension - 1;
        let mut out = vec![T::zero(); m * m * m];
        for (&[a, b, c], &v) in &self.c {
            for (p, s) in [([a, b, c], v), ([b, c, a], v), ([c, a, b], v), ([b, a, c], -v), ([a, c, b], -v), ([c, b, a], -v)] {
                out[(p[0] * m + p[1]) * m + p[2]] = s;
            }
        }
        out
    }
}

fn check_range(idx: Triple, m: usize) -> Result<()> {
    if idx.iter().any(|&i| i >= m) {
        return Err(Error::InvalidInput(format!("index triple {idx:?} out of range for {m} generators")));
    }
    Ok(())
}

fn insert_consistent<T: Real>(map: &mut BTreeMap<Triple, T>, key: Triple, value: T, tol: T, name: &str) -> Result<()> {
    if let Some(&old) = map.get(&key) {
        if (old - value).abs() > tol {
            return Err(Error::InvalidInput(format!("conflicting entries for {name}{key:?}")));
        }
        return Ok(());
    }
    map.insert(key, value);
    Ok(())
}

/// Name of an identity checked by [`verify_basis`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    Dimension,
    Hermiticity,
    Tracelessness,
    TraceOrthonormality,
    DiagonalStructure,
    Reconstruction,
    Jacobi,
    DiagonalCommutation,
    SymmetricVanishing,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Identity::Dimension => "dimension",
            Identity::Hermiticity => "hermiticity",
            Identity::Tracelessness => "tracelessness",
            Identity::TraceOrthonormality => "trace orthonormality",
            Identity::DiagonalStructure => "diagonal structure",
            Identity::Reconstruction => "reconstruction",
            Identity::Jacobi => "jacobi",
            Identity::DiagonalCommutation => "diagonal commutation",
            Identity::SymmetricVanishing => "symmetric vanishing",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub identity: Identity,
    pub indices: Vec<usize>,
    pub deviation: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {:?} (deviation {:e})", self.identity, self.indices, self.deviation)
    }
}

/// Checks every basis and structure-constant identity; an empty report
/// means all hold within `tol`.
///
/// Antisymmetry of `c` and symmetry of `f` are enforced by the sorted-key
/// storage and are not listed separately.
pub fn verify_basis<T: Real>(basis: &GeneratorBasis<T>, constants: &StructureConstants<T>, tol: T) -> Vec<Violation> {
    let mut report = Vec::new();
    let mut flag = |identity, indices: Vec<usize>, deviation: T| {
        if deviation > tol {
            report.push(Violation { identity, indices, deviation: deviation.as_f64() });
        }
    };
    let n = basis.dimension();
    if constants.dimension() != n {
        flag(Identity::Dimension, vec![n, constants.dimension()], T::max_value().unwrap_or_else(T::one));
        return report;
    }
    let m = basis.len();
    let t = basis.generators();
    let two = T::lit(2.0);

    for (i, g) in t.iter().enumerate() {
        flag(Identity::Hermiticity, vec![i], hermitian_deviation(g));
        flag(Identity::Tracelessness, vec![i], g.trace().modulus());
        let structure = if basis.is_diagonal_index(i) {
            (0..n).flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c))).fold(T::zero(), |acc, (r, c)| acc.max(g[(r, c)].modulus()))
        } else {
            (0..n).fold(T::zero(), |acc, r| acc.max(g[(r, r)].modulus()))
        };
        flag(Identity::DiagonalStructure, vec![i], structure);
    }

    let identity = CMatrix::<T>::identity(n, n);
    let two_over_n = two / T::lit(n as f64);
    for i in 0..m {
        for j in i..m {
            let expected = if i == j { two } else { T::zero() };
            let tr = trace_product(&t[i], &t[j]);
            flag(Identity::TraceOrthonormality, vec![i, j], (tr - creal(expected)).modulus());
        }
    }
    for i in 0..m {
        for j in 0..m {
            let mut rhs = if i == j { identity.map(|z| z * two_over_n) } else { CMatrix::zeros(n, n) };
            for l in 0..m {
                let coeff = cplx(constants.f(i, j, l), constants.c(i, j, l));
                if coeff.re != T::zero() || coeff.im != T::zero() {
                    rhs += t[l].map(|z| z * coeff);
                }
            }
            flag(Identity::Reconstruction, vec![i, j], max_abs_entry(&(&t[i] * &t[j] - rhs)));
        }
    }

    let c = constants.dense_c();
    let at = |i: usize, j: usize, k: usize| c[(i * m + j) * m + k];
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                for l in 0..m {
                    let mut sum = T::zero();
                    for s in 0..m {
                        sum += at(i, j, s) * at(s, k, l) + at(j, k, s) * at(s, i, l) + at(k, i, s) * at(s, j, l);
                    }
                    flag(Identity::Jacobi, vec![i, j, k, l], sum.abs());
                }
            }
        }
    }

    let diag = basis.diagonal_indices();
    for &a in diag {
        for &b in diag {
            for &d in diag {
                if a < b && b < d {
                    flag(Identity::DiagonalCommutation, vec![a, b, d], constants.c(a, b, d).abs());
                }
            }
            if a <= b {
                for &j in basis.offdiagonal_indices() {
                    flag(Identity::SymmetricVanishing, vec![a, j, b], constants.f(a, j, b).abs());
                }
            }
        }
    }
    report
}
