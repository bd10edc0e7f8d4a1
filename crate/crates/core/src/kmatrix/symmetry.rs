use super::KMatrix;
use crate::error::{Error, Result};
use crate::lie::SubalgebraBasis;
use crate::linalg::{
    canonical_basis, column_space, commutator, eye, flatten, hstack, kron, lstsq, nullspace,
    unflatten, unit, CMat, CVec,
};
use crate::spectral::ray_points;
use crate::KERNEL_CUTOFF;

/// Solutions `(X, Z)` of `ρ1(X)K(u) − K(u)ρ2(X) + [1⊗Z, K(u)] = 0` for all `u`.
#[derive(Debug, Clone)]
pub struct ResidualSymmetry {
    pub algebra: SubalgebraBasis,
    /// `Z` for each basis vector of `algebra`, traceless; empty when `d_B = 1`.
    pub boundary_images: Vec<CMat>,
    pub samples: usize,
}

fn symmetry_kernel(k: &KMatrix, samples: usize) -> Result<CMat> {
    let (rep1, rep2) = k.reps();
    let (d, m) = (k.d(), k.d_b());
    let dim = rep1.algebra().dim();
    let id_b = eye(m);
    let id_d = eye(d);
    let points = ray_points(samples);
    let ks: Vec<CMat> = points
        .iter()
        .map(|&u| k.evaluate(u))
        .collect::<Result<_>>()?;
    let block = d * d * m * m;
    let rows = samples * block + 1;
    let mut cols: Vec<CVec> = Vec::with_capacity(dim + m * m);
    for a in 0..dim {
        let l = kron(rep1.y(a), &id_b);
        let r = kron(rep2.y(a), &id_b);
        let mut col = CVec::zeros(rows);
        for (s, ku) in ks.iter().enumerate() {
            col.rows_mut(s * block, block)
                .copy_from(&flatten(&(&l * ku - ku * &r)));
        }
        cols.push(col);
    }
    for b in 0..m {
        for c in 0..m {
            let z = kron(&id_d, &unit(m, b, c));
            let mut col = CVec::zeros(rows);
            for (s, ku) in ks.iter().enumerate() {
                col.rows_mut(s * block, block)
                    .copy_from(&flatten(&commutator(&z, ku)));
            }
            // Tr Z = 0 removes the trivial direction (0, I).
            if b == c {
                col[rows - 1] = crate::linalg::re(1.0);
            }
            cols.push(col);
        }
    }
    Ok(nullspace(&hstack(&cols, rows), KERNEL_CUTOFF))
}

/// Residual symmetry algebra of `k`, sampled at `samples` points of a fixed
/// complex ray and re-checked with four more.
pub fn residual_symmetry(k: &KMatrix, samples: usize) -> Result<ResidualSymmetry> {
    let samples = samples.max(1);
    let coarse = symmetry_kernel(k, samples)?;
    let fine = symmetry_kernel(k, samples + 4)?;
    if coarse.ncols() != fine.ncols() {
        return Err(Error::SamplingInsufficient {
            coarse: coarse.ncols(),
            fine: fine.ncols(),
        });
    }
    let (rep1, _) = k.reps();
    let dim = rep1.algebra().dim();
    let m = k.d_b();
    let kx = fine.rows(0, dim).into_owned();
    let kz = fine.rows(dim, m * m).into_owned();
    let h = canonical_basis(&column_space(&kx, KERNEL_CUTOFF), KERNEL_CUTOFF);
    let boundary_images = if m == 1 {
        Vec::new()
    } else {
        let coeffs = lstsq(&kx, &h, KERNEL_CUTOFF);
        let z = kz * coeffs;
        (0..h.ncols())
            .map(|j| unflatten(z.column(j).as_slice(), m, m))
            .collect()
    };
    Ok(ResidualSymmetry {
        algebra: SubalgebraBasis::new(rep1.algebra().clone(), h)?,
        boundary_images,
        samples: samples + 4,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct IrreducibilityReport {
    /// The blocks `Ψ^{ij}(u)` generate all of `End(C^{d_B})`.
    pub irreducible: bool,
    pub commutant_dim: usize,
    pub generated_dim: usize,
}

/// Decides whether the boundary blocks of `k` leave a proper subspace of
/// `C^{d_B}` invariant, by computing the dimension of the algebra they
/// generate. The commutant dimension is reported alongside.
pub fn irreducibility_check(k: &KMatrix, samples: usize) -> Result<IrreducibilityReport> {
    let m = k.d_b();
    if m == 1 {
        return Ok(IrreducibilityReport {
            irreducible: true,
            commutant_dim: 1,
            generated_dim: 1,
        });
    }
    let mut gens = Vec::new();
    for u in ray_points(samples.max(1)) {
        gens.extend(k.boundary_blocks(u)?);
    }
    // Commutant: {X : [Ψ, X] = 0 for every block Ψ}.
    let mm = m * m;
    let rows = gens.len() * mm;
    let cols: Vec<CVec> = (0..mm)
        .map(|e| {
            let x = unit(m, e / m, e % m);
            let mut col = CVec::zeros(rows);
            for (g, psi) in gens.iter().enumerate() {
                col.rows_mut(g * mm, mm)
                    .copy_from(&flatten(&commutator(psi, &x)));
            }
            col
        })
        .collect();
    let commutant_dim = nullspace(&hstack(&cols, rows), KERNEL_CUTOFF).ncols();

    // Generated unital algebra: close span{I, Ψ} under left multiplication.
    let mut span_cols: Vec<CVec> = std::iter::once(eye(m))
        .chain(gens.iter().cloned())
        .map(|g| flatten(&g))
        .collect();
    let mut basis = column_space(&hstack(&span_cols, mm), KERNEL_CUTOFF);
    loop {
        let current: Vec<CMat> = (0..basis.ncols())
            .map(|j| unflatten(basis.column(j).as_slice(), m, m))
            .collect();
        span_cols = current.iter().map(flatten).collect();
        for g in &gens {
            for b in &current {
                span_cols.push(flatten(&(g * b)));
            }
        }
        let next = column_space(&hstack(&span_cols, mm), KERNEL_CUTOFF);
        let grew = next.ncols() > basis.ncols();
        basis = next;
        if !grew || basis.ncols() == mm {
            break;
        }
    }
    let generated_dim = basis.ncols();
    Ok(IrreducibilityReport {
        irreducible: generated_dim == mm,
        commutant_dim,
        generated_dim,
    })
}
