//! Library results checked against values derived independently of it: closed
//! forms, brute-force sums over kets, representation-theory counts.

use qchannel_core::algebra::{fixed_point_set, noise_commutant, noiseless_subsystems};
use qchannel_core::algorithms::{modular_adder, oracle_unitary, BooleanOracle};
use qchannel_core::channels::{
    amplitude_damping, bit_flip, classify, collective_rotation, default_collective_angles, kraus_from_choi,
    permutation_channel, ChoiMatrix,
};
use qchannel_core::qcore::{embed_single, gate, Gate};
use qchannel_core::qec::{builtin_code, correctability, BuiltinCode};
use qchannel_core::{Matrix, MatrixF32, C64};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Rank of a list of matrices via Gaussian elimination with partial pivoting on
/// their vectorizations, independent of the library's SVD.
fn rank(mats: &[Matrix], tol: f64) -> usize {
    let mut rows: Vec<Vec<C64>> = mats.iter().map(|m| m.data().to_vec()).collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..rows.len()).max_by(|&a, &b| rows[a][col].norm().total_cmp(&rows[b][col].norm())) else {
            break;
        };
        if rows[p][col].norm() <= tol {
            continue;
        }
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r {
                let f = rows[i][col] / rows[r][col];
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot) {
                    *x -= f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// dim {X : [X, G] = 0 for all G} as N² minus the rank of the maps X ↦ [X, G] on matrix units.
fn commutant_dim_brute_force(gens: &[Matrix]) -> usize {
    let n = gens[0].rows();
    let mut images = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let e = Matrix::unit(n, i, j);
            // Column (i, j) of the stacked commutator map.
            let mut col = Vec::new();
            for g in gens {
                col.extend_from_slice(e.commutator(g).data());
            }
            images.push(Matrix::from_vec(1, col.len(), col).unwrap());
        }
    }
    n * n - rank(&images, 1e-9)
}

#[test]
fn amplitude_damping_choi_closed_form() {
    let r: f64 = 0.3;
    let ch = amplitude_damping(r).unwrap();
    // Blocks E(e_00) = diag(1, 0), E(e_01) = √(1−r) e_01, E(e_11) = diag(r, 1−r).
    let s = (1.0 - r).sqrt();
    let want = Matrix::from_vec(
        4,
        4,
        [
            [1.0, 0.0, 0.0, s],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, r, 0.0],
            [s, 0.0, 0.0, 1.0 - r],
        ]
        .iter()
        .flatten()
        .map(|&x| c(x))
        .collect(),
    )
    .unwrap();
    assert!(ch.choi().matrix().dist(&want) <= 1e-15);
    let back = kraus_from_choi(&ChoiMatrix::new(2, want).unwrap(), 1e-9).unwrap();
    assert_eq!(back.len(), 2);
}

#[test]
fn amplitude_damping_fixed_points_closed_form() {
    // E(ρ) = [[ρ00 + rρ11, √(1−r)ρ01], [√(1−r)ρ10, (1−r)ρ11]]: fixed iff ρ = ρ00|0⟩⟨0|.
    for r in [0.1f64, 0.5, 0.9] {
        let f = fixed_point_set(&amplitude_damping(r).unwrap(), 1e-9);
        assert_eq!(f.dimension(), 1);
        let b = &f.basis()[0];
        assert!((b[(0, 0)].norm() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn commutant_dimensions_match_brute_force() {
    let third = 1.0 / 3.0;
    let channels = [
        bit_flip(0.3).unwrap(),
        collective_rotation(3, default_collective_angles(), [third; 3]).unwrap(),
        permutation_channel(2, 3, None).unwrap(),
    ];
    for ch in &channels {
        let mut gens = ch.operators().to_vec();
        gens.extend(ch.operators().iter().map(Matrix::adjoint));
        assert_eq!(noise_commutant(ch, 1e-9).dimension(), commutant_dim_brute_force(&gens));
    }
}

#[test]
fn three_qubit_commutants_from_spin_multiplicities() {
    // (C²)^⊗3 = spin 3/2 (multiplicity 1) ⊕ spin 1/2 (multiplicity 2).
    // Collective rotations: commutant ≅ M_1 ⊕ M_2, dimension 1² + 2² = 5.
    // Permutations: commutant ≅ M_4 ⊕ M_2, dimension 4² + 2² = 20.
    let third = 1.0 / 3.0;
    let rot = collective_rotation(3, default_collective_angles(), [third; 3]).unwrap();
    let r = noiseless_subsystems(&rot, 1e-9, 0).unwrap();
    assert_eq!(r.commutant_dim, 1 + 4);
    let perm = permutation_channel(2, 3, None).unwrap();
    let p = noiseless_subsystems(&perm, 1e-9, 0).unwrap();
    assert_eq!(p.commutant_dim, 16 + 4);
    let blocks: Vec<(usize, usize)> = p.structure.blocks.iter().map(|b| (b.m, b.n)).collect();
    assert_eq!(blocks, vec![(1, 4), (2, 2)]);
}

/// Shor code words written out from |000⟩ ± |111⟩ per block.
fn shor_kets() -> [Vec<C64>; 2] {
    let mut out = [vec![c(0.0); 512], vec![c(0.0); 512]];
    for (word, sign) in [(0, 1.0), (1, -1.0)] {
        for bits in 0u32..8 {
            // Choose |000⟩ or |111⟩ in each of the three blocks.
            let mut idx = 0usize;
            let mut amp = 1.0;
            for block in 0..3 {
                let ones = (bits >> (2 - block)) & 1 == 1;
                idx = (idx << 3) | if ones { 0b111 } else { 0 };
                if ones {
                    amp *= sign;
                }
            }
            out[word][idx] = c(amp / 8f64.sqrt());
        }
    }
    out
}

#[test]
fn shor_lambda_by_direct_inner_products() {
    let kets = shor_kets();
    let code = builtin_code::<f64>(BuiltinCode::Shor9);
    for (w, ket) in kets.iter().enumerate() {
        let col = code.isometry().col(w);
        let overlap: C64 = col.iter().zip(ket).map(|(a, b)| a.conj() * b).sum();
        assert!((overlap.norm() - 1.0).abs() <= 1e-12);
    }
    for k in [1, 5, 9] {
        let errs: Vec<Matrix> = [Gate::I2, Gate::X, Gate::Y, Gate::Z]
            .iter()
            .map(|&g| if g == Gate::I2 { Matrix::identity(512) } else { embed_single(&gate(g), k, 9).unwrap() })
            .collect();
        // λ_ij = ⟨0_L| E_i† E_j |0_L⟩, and the off-diagonal code block must vanish.
        let mut want = Matrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                let ej0 = errs[j].apply(&kets[0]);
                let ej1 = errs[j].apply(&kets[1]);
                let ei0 = errs[i].apply(&kets[0]);
                let ei1 = errs[i].apply(&kets[1]);
                let dot = |a: &[C64], b: &[C64]| -> C64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum() };
                want[(i, j)] = dot(&ei0, &ej0);
                assert!((dot(&ei1, &ej1) - want[(i, j)]).norm() <= 1e-12);
                assert!(dot(&ei0, &ej1).norm() <= 1e-12);
            }
        }
        let res = correctability(&code, &errs, 1e-9).unwrap();
        assert!(res.lambda.unwrap().dist(&want) <= 1e-12, "qubit {k}");
    }
}

#[test]
fn adder_matches_integer_addition() {
    for n in 1..=3usize {
        let u: Matrix = modular_adder(n).unwrap();
        let size = 1 << n;
        for x in 0..size {
            for y in 0..size {
                let col = x * size + y;
                let row = x * size + (x + y) % size;
                assert_eq!(u[(row, col)], c(1.0));
            }
        }
    }
}

#[test]
fn oracle_unitary_matches_xor_rule() {
    let f = BooleanOracle::new(2, 2, vec![3, 0, 2, 1]).unwrap();
    let u: Matrix = oracle_unitary(&f);
    for x in 0..4usize {
        for y in 0..4usize {
            assert_eq!(u[((x << 2) | (y ^ f.eval(x)), (x << 2) | y)], c(1.0));
        }
    }
}

#[test]
fn single_precision_channels() {
    let ch = bit_flip::<f32>(0.3).unwrap();
    let out: MatrixF32 = ch.apply(&MatrixF32::unit(2, 0, 0)).unwrap();
    assert!((out[(0, 0)].re - 0.7).abs() <= 1e-6);
    assert!((out[(1, 1)].re - 0.3).abs() <= 1e-6);
    let cls = classify(&ch, 1e-5);
    assert!(cls.completely_positive && cls.trace_preserving && cls.unital);
    let back = kraus_from_choi(&ch.choi(), 1e-5).unwrap();
    assert!(qchannel_core::channels::choi_distance(&ch, &back).unwrap() <= 1e-5);
}
