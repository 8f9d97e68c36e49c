//! Dense complex linear-algebra helpers: matrix exponential, block
//! decomposition, sparse row views and norm utilities.

use crate::{CMatrix, C64};

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// Backward-error bounds for each Padé degree (Higham 2005, table 10.2).
const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.53939833006323e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA13: f64 = 5.371920351148152;

/// Induced 1-norm (max column sum).
pub fn norm_one(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Induced ∞-norm (max row sum).
pub fn norm_inf(a: &CMatrix) -> f64 {
    a.row_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest entry modulus.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |a_ij - b_ij|`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `max |A - A†|`.
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

/// `max |U†U - I|`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let n = u.nrows();
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(n, n))
}

/// Matrix exponential by scaling and squaring with a diagonal Padé
/// approximant of degree 3, 5, 7, 9 or 13, whichever is the cheapest one
/// whose backward-error bound covers `‖A‖₁`.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    if n == 1 {
        return CMatrix::from_element(1, 1, a[(0, 0)].exp());
    }

    let norm = norm_one(a);
    for &(degree, theta) in THETA.iter() {
        if norm <= theta {
            return pade_low(a, degree);
        }
    }

    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as u32
    } else {
        0
    };
    let scaled = a.scale(0.5f64.powi(squarings as i32));
    let mut result = pade13(&scaled);
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

fn pade_low(a: &CMatrix, degree: usize) -> CMatrix {
    let b: &[f64] = match degree {
        3 => &PADE3,
        5 => &PADE5,
        7 => &PADE7,
        9 => &PADE9,
        _ => unreachable!("unsupported Padé degree {degree}"),
    };
    let n = a.nrows();
    let ident = CMatrix::identity(n, n);
    let a2 = a * a;

    // Even powers I, A², A⁴, ... up to A^(degree-1).
    let mut powers = vec![ident.clone(), a2.clone()];
    while powers.len() < degree.div_ceil(2) {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }

    let mut u_inner = CMatrix::zeros(n, n);
    let mut v = CMatrix::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        u_inner += p * C64::from(b[2 * k + 1]);
        v += p * C64::from(b[2 * k]);
    }
    let u = a * u_inner;
    solve_pade(&u, &v)
}

fn pade13(a: &CMatrix) -> CMatrix {
    let b = &PADE13;
    let n = a.nrows();
    let ident = CMatrix::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let c = |k: usize| C64::from(b[k]);

    let u_hi = &a6 * (&a6 * c(13) + &a4 * c(11) + &a2 * c(9));
    let u = a * (u_hi + &a6 * c(7) + &a4 * c(5) + &a2 * c(3) + &ident * c(1));
    let v_hi = &a6 * (&a6 * c(12) + &a4 * c(10) + &a2 * c(8));
    let v = v_hi + &a6 * c(6) + &a4 * c(4) + &a2 * c(2) + &ident * c(0);
    solve_pade(&u, &v)
}

fn solve_pade(u: &CMatrix, v: &CMatrix) -> CMatrix {
    let p = v + u;
    let q = v - u;
    q.lu()
        .solve(&p)
        .expect("Padé denominator is nonsingular within its convergence region")
}

/// Connected components of the nonzero pattern of `a` (treated as an
/// undirected graph). Each component is returned as a sorted index list.
pub fn connected_blocks(a: &CMatrix) -> Vec<Vec<usize>> {
    let n = a.nrows();
    let mut parent: Vec<usize> = (0..n).collect();

    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }

    for i in 0..n {
        for j in (i + 1)..n {
            if a[(i, j)] != C64::new(0.0, 0.0) || a[(j, i)] != C64::new(0.0, 0.0) {
                let ri = find(&mut parent, i);
                let rj = find(&mut parent, j);
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }

    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    groups.into_values().collect()
}

/// `exp(A)` computed block by block over the connected components of the
/// nonzero pattern of `A`. Exact for any `A` (the exponential of a
/// block-diagonal matrix is block-diagonal), and far cheaper than a dense
/// exponential for the sparse couplings used here.
pub fn expm_blockwise(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    let mut out = CMatrix::zeros(n, n);
    for block in connected_blocks(a) {
        if block.len() == 1 {
            let i = block[0];
            out[(i, i)] = a[(i, i)].exp();
            continue;
        }
        let m = block.len();
        let sub = CMatrix::from_fn(m, m, |r, c| a[(block[r], block[c])]);
        let e = expm(&sub);
        for (r, &gr) in block.iter().enumerate() {
            for (c, &gc) in block.iter().enumerate() {
                out[(gr, gc)] = e[(r, c)];
            }
        }
    }
    out
}

/// Row-compressed view of a matrix's nonzero entries.
#[derive(Clone, Debug)]
pub struct SparseRows {
    dim: usize,
    rows: Vec<Vec<(usize, C64)>>,
}

impl SparseRows {
    pub fn from_dense(a: &CMatrix) -> Self {
        let rows = (0..a.nrows())
            .map(|i| {
                (0..a.ncols())
                    .filter_map(|j| {
                        let v = a[(i, j)];
                        (v != C64::new(0.0, 0.0)).then_some((j, v))
                    })
                    .collect()
            })
            .collect();
        SparseRows { dim: a.ncols(), rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn rows(&self) -> &[Vec<(usize, C64)>] {
        &self.rows
    }

    /// All `(row, col, value)` triplets.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, v)| (i, j, v)))
    }

    /// `out += coeff · self · x`
    pub fn mul_left_acc(&self, x: &CMatrix, coeff: C64, out: &mut CMatrix) {
        let n = x.nrows();
        let xs = x.as_slice();
        let os = out.as_mut_slice();
        // Column-major: walk one column of x and out at a time.
        for (xc, oc) in xs.chunks_exact(n).zip(os.chunks_exact_mut(n)) {
            for (row, o) in self.rows.iter().zip(oc.iter_mut()) {
                let acc: C64 = row.iter().map(|&(k, v)| v * xc[k]).sum();
                *o += coeff * acc;
            }
        }
    }

    /// `out += coeff · x · self†`
    pub fn mul_right_adjoint_acc(&self, x: &CMatrix, coeff: C64, out: &mut CMatrix) {
        // (x · S†)[:, j] = Σ_k conj(S[j, k]) · x[:, k]
        let n = x.nrows();
        let xs = x.as_slice();
        let os = out.as_mut_slice();
        for (row, oc) in self.rows.iter().zip(os.chunks_exact_mut(n)) {
            for &(k, v) in row {
                let f = coeff * v.conj();
                for (o, xv) in oc.iter_mut().zip(&xs[k * n..(k + 1) * n]) {
                    *o += f * xv;
                }
            }
        }
    }
}
