//! Sparse symmetric matrices, envelope Cholesky, and a block shift-invert
//! eigensolver for symmetric pencils `A u = λ W u` with `W` semidefinite.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{bail, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Compressed sparse row matrix (square, both triangles stored).
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    /// Builds an `n × n` matrix, summing duplicate entries.
    pub fn from_triplets(n: usize, mut t: Vec<(usize, usize, f64)>) -> Self {
        t.sort_unstable_by_key(|e| (e.0, e.1));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(t.len());
        let mut vals: Vec<f64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in t {
            if last == Some((i, j)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(j);
                vals.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { n, row_ptr, cols, vals }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_vec_into(x, &mut y);
        y
    }

    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[k] * x[self.cols[k]];
            }
            *yi = s;
        }
    }

    /// `xᵀ A y`.
    pub fn form(&self, x: &[f64], y: &[f64]) -> f64 {
        (0..self.n)
            .map(|i| x[i] * self.row(i).map(|(j, v)| v * y[j]).sum::<f64>())
            .sum()
    }

    /// Sum of all entries.
    pub fn total(&self) -> f64 {
        self.vals.iter().sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            vals: self.vals.iter().map(|v| s * v).collect(),
            ..self.clone()
        }
    }

    /// `Σ cᵢ Aᵢ` over matrices of equal size.
    pub fn combination(terms: &[(f64, &CsrMatrix)]) -> Self {
        let n = terms[0].1.n;
        let mut t = Vec::with_capacity(terms.iter().map(|(_, m)| m.nnz()).sum());
        for (c, m) in terms {
            debug_assert_eq!(m.n, n);
            for i in 0..n {
                for (j, v) in m.row(i) {
                    t.push((i, j, c * v));
                }
            }
        }
        Self::from_triplets(n, t)
    }

    /// Largest asymmetry `|aᵢⱼ − aⱼᵢ|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Principal submatrix on `idx` (sorted, distinct).
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        let mut map = vec![usize::MAX; self.n];
        for (k, &i) in idx.iter().enumerate() {
            map[i] = k;
        }
        let mut t = Vec::new();
        for (k, &i) in idx.iter().enumerate() {
            for (j, v) in self.row(i) {
                if map[j] != usize::MAX {
                    t.push((k, map[j], v));
                }
            }
        }
        Self::from_triplets(idx.len(), t)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                d[(i, j)] += v;
            }
        }
        d
    }

    fn degree(&self, i: usize) -> usize {
        self.row(i).filter(|&(j, _)| j != i).count()
    }
}

/// Reverse Cuthill–McKee ordering with nodes of very high degree (fan
/// centres) moved to the end. Returns `perm[new] = old`.
pub fn rcm_ordering(a: &CsrMatrix) -> Vec<usize> {
    let n = a.n();
    let deg: Vec<usize> = (0..n).map(|i| a.degree(i)).collect();
    let mut sorted = deg.clone();
    sorted.sort_unstable();
    let typical = sorted.get(n / 2).copied().unwrap_or(0);
    let hub_limit = (4 * typical).max(16);
    let is_hub: Vec<bool> = deg.iter().map(|&d| d > hub_limit).collect();

    let mut visited = is_hub.clone();
    let mut order = Vec::with_capacity(n);
    let neighbours = |i: usize, visited: &[bool]| -> Vec<usize> {
        let mut v: Vec<usize> = a.row(i).map(|(j, _)| j).filter(|&j| j != i && !visited[j]).collect();
        v.sort_by_key(|&j| deg[j]);
        v
    };
    while let Some(seed) = (0..n).filter(|&i| !visited[i]).min_by_key(|&i| deg[i]) {
        // two BFS sweeps to approach a peripheral node
        let start = {
            let mut s = seed;
            for _ in 0..2 {
                let mut seen = visited.clone();
                let mut queue = vec![s];
                seen[s] = true;
                let mut head = 0;
                while head < queue.len() {
                    let u = queue[head];
                    head += 1;
                    for w in neighbours(u, &seen) {
                        seen[w] = true;
                        queue.push(w);
                    }
                }
                s = *queue.last().unwrap();
            }
            s
        };
        let first = order.len();
        order.push(start);
        visited[start] = true;
        let mut head = first;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for w in neighbours(u, &visited) {
                visited[w] = true;
                order.push(w);
            }
        }
    }
    order.reverse();
    order.extend((0..n).filter(|&i| is_hub[i]));
    order
}

/// Cholesky factor stored row by row from each row's first nonzero column.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    vals: Vec<f64>,
}

impl EnvelopeCholesky {
    /// Factors `A` under the ordering `perm[new] = old`.
    pub fn factor(a: &CsrMatrix, perm: &[usize]) -> Result<Self> {
        let n = a.n();
        let mut inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for (new, &old) in perm.iter().enumerate() {
            for (j, _) in a.row(old) {
                first[new] = first[new].min(inv[j]);
            }
        }
        let mut start = vec![0usize; n + 1];
        for i in 0..n {
            start[i + 1] = start[i] + (i - first[i] + 1);
        }
        let mut vals = vec![0.0; start[n]];
        for (new, &old) in perm.iter().enumerate() {
            for (j, v) in a.row(old) {
                let c = inv[j];
                if c <= new {
                    vals[start[new] + c - first[new]] += v;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            for j in fi..i {
                let fj = first[j];
                let lo = fi.max(fj);
                let (head, tail) = vals.split_at_mut(start[i]);
                let row_j = &head[start[j]..start[j + 1]];
                let row_i = &mut tail[..i - fi + 1];
                let dot: f64 = row_i[lo - fi..j - fi]
                    .iter()
                    .zip(&row_j[lo - fj..j - fj])
                    .map(|(x, y)| x * y)
                    .sum();
                row_i[j - fi] = (row_i[j - fi] - dot) / row_j[j - fj];
            }
            let row_i = &mut vals[start[i]..start[i + 1]];
            let (off, diag) = row_i.split_at_mut(i - fi);
            let d = diag[0] - off.iter().map(|x| x * x).sum::<f64>();
            if !(d > 0.0) {
                bail!(Factorization, "nonpositive pivot {d} at step {i} of {n}");
            }
            diag[0] = d.sqrt();
        }
        Ok(Self {
            perm: perm.to_vec(),
            first,
            start,
            vals,
        })
    }

    /// Number of stored factor entries.
    pub fn envelope_size(&self) -> usize {
        self.vals.len()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.perm.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.vals[self.start[i]..self.start[i + 1]];
            let dot: f64 = row[..i - fi].iter().zip(&y[fi..i]).map(|(l, v)| l * v).sum();
            y[i] = (y[i] - dot) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.vals[self.start[i]..self.start[i + 1]];
            y[i] /= row[i - fi];
            let xi = y[i];
            for (yk, l) in y[fi..i].iter_mut().zip(&row[..i - fi]) {
                *yk -= l * xi;
            }
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }

    /// `log det A`.
    pub fn log_det(&self) -> f64 {
        (0..self.perm.len())
            .map(|i| 2.0 * self.vals[self.start[i + 1] - 1].ln())
            .sum()
    }
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// Modified Gram–Schmidt in the `W` inner product, run twice. Vectors whose
/// norm collapses below `1e-10` of their original size are dropped.
pub(crate) fn w_orthonormalize(w: &CsrMatrix, block: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(block.len());
    let mut wout: Vec<Vec<f64>> = Vec::with_capacity(block.len());
    for mut v in block {
        let orig = w.form(&v, &v).max(0.0).sqrt();
        if !(orig > 0.0) {
            continue;
        }
        for _ in 0..2 {
            for (q, wq) in out.iter().zip(&wout) {
                let c = dot(wq, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= c * qi;
                }
            }
        }
        let wv = w.mul_vec(&v);
        let nv = dot(&v, &wv).max(0.0).sqrt();
        if nv <= 1e-10 * orig {
            continue;
        }
        for x in v.iter_mut() {
            *x /= nv;
        }
        out.push(v);
        wout.push(wv.into_iter().map(|x| x / nv).collect());
    }
    out
}

/// Converged eigenpairs of a symmetric pencil.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    /// `W`-orthonormal eigenvectors.
    pub vectors: Vec<Vec<f64>>,
    /// `‖A u − λ W u‖₂` per pair.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    /// Shift of the final factorization.
    pub shift: f64,
}

/// Stopping rules of [`subspace_eigs`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceOptions {
    /// Residual at which iteration stops.
    pub target: f64,
    /// Residual that must be met on return.
    pub contract: f64,
    pub max_iter: usize,
}

impl Default for SubspaceOptions {
    fn default() -> Self {
        Self {
            target: 1e-11,
            contract: 1e-8,
            max_iter: 2000,
        }
    }
}

/// Smallest `k` eigenpairs of `A u = λ W u` by block inverse iteration on
/// `(A − sW)⁻¹ W` with Rayleigh–Ritz. `shift` must lie below the wanted
/// eigenvalues; when `A − sW` is not positive definite the shift is pushed
/// down by `shift_step` until it is. `start` supplies the initial block.
pub fn subspace_eigs(
    a: &CsrMatrix,
    w: &CsrMatrix,
    k: usize,
    mut shift: f64,
    shift_step: f64,
    start: Vec<Vec<f64>>,
    opts: SubspaceOptions,
) -> Result<Eigenpairs> {
    let n = a.n();
    if k == 0 || k > start.len() || start.len() > n {
        bail!(
            Domain,
            "need 0 < k ≤ block size ≤ n (k = {k}, block = {}, n = {n})",
            start.len()
        );
    }
    let perm = rcm_ordering(a);
    let factor_at = |s: f64| EnvelopeCholesky::factor(&CsrMatrix::combination(&[(1.0, a), (-s, w)]), &perm);
    let mut step = shift_step;
    let mut chol = loop {
        match factor_at(shift) {
            Ok(c) => break c,
            Err(_) if step.is_finite() && shift > -1e300 => {
                shift -= step;
                step *= 2.0;
            }
            Err(e) => return Err(e),
        }
    };

    let mut x = w_orthonormalize(w, start);
    let mut theta: Vec<f64> = Vec::new();
    let mut residuals = vec![f64::INFINITY; k];
    let mut best = f64::INFINITY;
    let mut stalled = 0;
    let mut reshifted = false;
    for iter in 1..=opts.max_iter {
        let y: Vec<Vec<f64>> = x.iter().map(|v| chol.solve(&w.mul_vec(v))).collect();
        let y = w_orthonormalize(w, y);
        if y.len() < k {
            bail!(NoConvergence, "subspace collapsed to {} vectors", y.len());
        }
        let m = y.len();
        let ay: Vec<Vec<f64>> = y.iter().map(|v| a.mul_vec(v)).collect();
        let h = DMatrix::from_fn(m, m, |i, j| 0.5 * (dot(&y[i], &ay[j]) + dot(&y[j], &ay[i])));
        let eig = SymmetricEigen::new(h);
        let mut idx: Vec<usize> = (0..m).collect();
        idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        theta = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut nx = Vec::with_capacity(m);
        let mut nax = Vec::with_capacity(m);
        for &c in &idx {
            let mut v = vec![0.0; n];
            let mut av = vec![0.0; n];
            for r in 0..m {
                let q = eig.eigenvectors[(r, c)];
                for t in 0..n {
                    v[t] += q * y[r][t];
                    av[t] += q * ay[r][t];
                }
            }
            nx.push(v);
            nax.push(av);
        }
        x = nx;
        for i in 0..k {
            let wx = w.mul_vec(&x[i]);
            let r: Vec<f64> = nax[i].iter().zip(&wx).map(|(av, wv)| av - theta[i] * wv).collect();
            residuals[i] = norm2(&r);
        }
        let worst = residuals.iter().copied().fold(0.0, f64::max);
        if worst <= opts.target {
            return finish(theta, x, residuals, iter, shift, k, opts);
        }
        if worst < 0.5 * best {
            best = worst;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled > 25 && best <= opts.contract {
                return finish(theta, x, residuals, iter, shift, k, opts);
            }
        }
        // Move a shift that sits far below the spectrum up under the
        // lowest Ritz value once that value is trustworthy.
        if !reshifted && worst < 1e-3 * (1.0 + theta[k - 1].abs()) && m > k {
            let spread = theta[m - 1] - theta[0];
            let target = theta[0] - 0.05 * spread - 1e-3 * (1.0 + theta[0].abs());
            if (theta[k - 1] - shift) > 0.2 * (theta[m - 1] - shift) && target > shift {
                if let Ok(c) = factor_at(target) {
                    chol = c;
                    shift = target;
                }
            }
            reshifted = true;
        }
    }
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    if worst <= opts.contract {
        return finish(theta, x, residuals, opts.max_iter, shift, k, opts);
    }
    bail!(NoConvergence, "subspace iteration stopped with residual {worst}")
}

fn finish(
    mut theta: Vec<f64>,
    mut x: Vec<Vec<f64>>,
    residuals: Vec<f64>,
    iterations: usize,
    shift: f64,
    k: usize,
    opts: SubspaceOptions,
) -> Result<Eigenpairs> {
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    if worst > opts.contract {
        bail!(NoConvergence, "residual {worst} above {}", opts.contract);
    }
    theta.truncate(k);
    x.truncate(k);
    Ok(Eigenpairs {
        values: theta,
        vectors: x,
        residuals,
        iterations,
        shift,
    })
}

/// Smallest `k` eigenpairs of the dense pencil `A u = λ M u` with `M`
/// positive definite, through `M = LLᵀ` and `L⁻¹AL⁻ᵀ`.
pub fn dense_generalized_eigs(a: &DMatrix<f64>, m: &DMatrix<f64>, k: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = a.nrows();
    let Some(chol) = m.clone().cholesky() else {
        bail!(Factorization, "mass matrix is not positive definite");
    };
    let l = chol.l();
    let linv = l
        .clone()
        .solve_lower_triangular(&DMatrix::identity(n, n))
        .expect("nonsingular triangular factor");
    let mut c = &linv * a * linv.transpose();
    c = 0.5 * (&c + c.transpose());
    let eig = SymmetricEigen::new(c);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let mut vals = Vec::with_capacity(k);
    let mut vecs = Vec::with_capacity(k);
    for &i in idx.iter().take(k) {
        vals.push(eig.eigenvalues[i]);
        let z = eig.eigenvectors.column(i).into_owned();
        let u = linv.transpose() * z;
        vecs.push(u.iter().copied().collect());
    }
    Ok((vals, vecs))
}
