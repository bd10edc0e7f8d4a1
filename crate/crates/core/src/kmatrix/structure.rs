use super::BoundaryRep;
use crate::error::{Error, Result};
use crate::lie::{restricted_casimir, Representation};
use crate::linalg::{
    commutator, embed, eye, flatten, fro, hstack, inverse, kron, lstsq, nullspace, rcond,
    unflatten, CMat, CVec,
};
use crate::KERNEL_CUTOFF;

/// First-order structure of a K-matrix with boundary space `C^{d_B}`.
#[derive(Debug, Clone)]
pub struct K1StructureReport {
    /// `min_D ‖k̃ − ½c^(h,1)⊗1 − 2C^(h,1B) − D⊗1‖` over `D` commuting with `ρ1(g)`.
    pub decomposition_defect: f64,
    /// The minimizing `D`.
    pub d: CMat,
    /// `‖2[C^(h,11)_12, k̃_23] + [k̃_13, k̃_23]‖`.
    pub x2a_residual: f64,
    /// `k̃ = k⁽¹⁾ (κ⁻¹ ⊗ 1)`.
    pub k_tilde: CMat,
    /// `½c^(h,1)⊗1 + 2C^(h,1B)`.
    pub predicted: CMat,
}

/// Checks a candidate first-order coefficient `k1` against the predicted
/// structure, for `κ̃ = κ ⊗ 1` and a boundary representation of `h`.
pub fn k1_structure_check(
    rep: &Representation,
    kappa: &CMat,
    boundary: &BoundaryRep,
    k1: &CMat,
) -> Result<K1StructureReport> {
    let d = rep.d();
    let h = &boundary.h;
    let m = boundary.images.first().map(|z| z.nrows()).unwrap_or(1);
    if k1.shape() != (d * m, d * m) || kappa.shape() != (d, d) {
        return Err(Error::ShapeMismatch("k1 must act on C^d ⊗ C^{d_B}".into()));
    }
    let hom = boundary_homomorphism_residual(boundary)?;
    if hom > 1e-8 {
        return Err(Error::NotHomomorphism { residual: hom });
    }
    let kinv = inverse(kappa).ok_or(Error::NotQuasiClassical {
        rcond: rcond(kappa),
    })?;
    let id_b = eye(m);
    let k_tilde = k1 * kron(&kinv, &id_b);

    let rc = restricted_casimir(rep, rep, h)?;
    // C^(h,1B) = B^ab ρ1(X_a) ⊗ ρ_B(X_b).
    let mut c1b = CMat::zeros(d * m, d * m);
    for a in 0..h.dim() {
        let ya = rep.image(&h.vector(a));
        let mut zb = CMat::zeros(m, m);
        for b in 0..h.dim() {
            zb += &boundary.images[b] * rc.metric_inv[(a, b)];
        }
        c1b += kron(&ya, &zb);
    }
    let predicted =
        kron(&rc.quadratic, &id_b) * crate::linalg::re(0.5) + c1b * crate::linalg::re(2.0);

    // Commutant of ρ1(g) on C^d.
    let cols: Vec<CVec> = (0..d * d)
        .map(|e| {
            let x = crate::linalg::unit(d, e / d, e % d);
            let parts: Vec<_> = rep
                .matrices()
                .iter()
                .flat_map(|y| {
                    flatten(&commutator(y, &x))
                        .iter()
                        .copied()
                        .collect::<Vec<_>>()
                })
                .collect();
            CVec::from_vec(parts)
        })
        .collect();
    let comm = nullspace(&hstack(&cols, cols[0].len()), KERNEL_CUTOFF);
    let target = flatten(&(&k_tilde - &predicted));
    let dcols: Vec<CVec> = (0..comm.ncols())
        .map(|j| flatten(&kron(&unflatten(comm.column(j).as_slice(), d, d), &id_b)))
        .collect();
    let d_mat = if dcols.is_empty() {
        CMat::zeros(d, d)
    } else {
        let basis = hstack(&dcols, target.len());
        let coef = lstsq(
            &basis,
            &CMat::from_column_slice(target.len(), 1, target.as_slice()),
            KERNEL_CUTOFF,
        );
        let mut dm = CMat::zeros(d, d);
        for j in 0..comm.ncols() {
            dm += unflatten(comm.column(j).as_slice(), d, d) * coef[(j, 0)];
        }
        dm
    };
    let decomposition_defect = fro(&(&k_tilde - &predicted - kron(&d_mat, &id_b)));

    let dims = [d, d, m];
    let c12 = embed(&rc.split, &[0, 1], &dims);
    let k13 = embed(&k_tilde, &[0, 2], &dims);
    let k23 = embed(&k_tilde, &[1, 2], &dims);
    let x2a = commutator(&c12, &k23) * crate::linalg::re(2.0) + commutator(&k13, &k23);
    Ok(K1StructureReport {
        decomposition_defect,
        d: d_mat,
        x2a_residual: fro(&x2a),
        k_tilde,
        predicted,
    })
}

/// `max ‖[Z_a, Z_b] − g_ab^c Z_c‖` with `g` the structure constants of `h`
/// in its own basis.
pub(crate) fn boundary_homomorphism_residual(boundary: &BoundaryRep) -> Result<f64> {
    let h = &boundary.h;
    let alg = h.parent();
    let k = h.dim();
    let v = h.vectors();
    let mut worst = 0.0f64;
    for a in 0..k {
        for b in 0..k {
            let br = alg.bracket(&h.vector(a), &h.vector(b));
            let g = lstsq(
                v,
                &CMat::from_column_slice(br.len(), 1, br.as_slice()),
                KERNEL_CUTOFF,
            );
            let mut rhs = CMat::zeros(boundary.images[0].nrows(), boundary.images[0].ncols());
            for c in 0..k {
                rhs += &boundary.images[c] * g[(c, 0)];
            }
            worst = worst.max(fro(
                &(commutator(&boundary.images[a], &boundary.images[b]) - rhs)
            ));
        }
    }
    Ok(worst)
}
