mod common;

use std::collections::BTreeMap;

use common::*;
use ncqo::algebra::{normal_order, GeneratorKind, ModeId, OperatorWord};
use ncqo::fock::{
    algebra_checks, build_generators, coherent_state, dump, eigen_residual, energies,
    field_averages, hamiltonians, idempotence_defect, mode_superposition, vacuum_energies,
    Evolution, ExtensionWeights, FieldGeometry, Generators, HeisenbergProbe, ModeGeometry,
    OracleConfig, SparseVec,
};
use ncqo::vacuum::VacuumSpec;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn apply_word_sparse(gens: &Generators, n: usize, word: &OperatorWord, v: &SparseVec) -> SparseVec {
    let mut out = v.clone();
    for g in word.factors.iter().rev() {
        out = gens.get(g).unwrap().apply_sparse(n, &out);
    }
    let c = word.coefficient.to_c64();
    out.values_mut().for_each(|z| *z *= c);
    out
}

#[test]
fn every_short_word_equals_its_normal_form_as_a_matrix() {
    let cfg = OracleConfig::numbered(2, 7, 2).unwrap();
    let gens = build_generators(&cfg).unwrap();
    let columns: Vec<Vec<(usize, usize)>> = (1..=2)
        .map(|n| {
            (0..cfg.sector_dim(n))
                .map(|j| (j, cfg.total_excitation(n, j)))
                .collect()
        })
        .collect();
    let mut worst: f64 = 0.0;
    let mut compared = 0usize;
    for word in words_up_to_relabel(6, 2, &ALL_KINDS) {
        let creators = word
            .factors
            .iter()
            .filter(|g| g.kind == GeneratorKind::Create)
            .count();
        let terms = normal_order(&word).unwrap().to_words();
        for n in 1..=2 {
            for &(j, exc) in &columns[n - 1] {
                if exc + creators >= cfg.fock_dim {
                    continue;
                }
                let e = SparseVec::from([(j, C64::new(1.0, 0.0))]);
                let lhs = apply_word_sparse(&gens, n, &word, &e);
                let mut rhs = SparseVec::new();
                for t in &terms {
                    for (k, z) in apply_word_sparse(&gens, n, t, &e) {
                        *rhs.entry(k).or_default() += z;
                    }
                }
                for k in lhs.keys().chain(rhs.keys()) {
                    let d = lhs.get(k).copied().unwrap_or_default()
                        - rhs.get(k).copied().unwrap_or_default();
                    worst = worst.max(d.norm());
                }
                compared += 1;
            }
        }
    }
    assert!(compared > 100_000);
    assert!(worst < 1e-10, "worst entry deviation {worst:e}");
}

#[test]
fn algebra_holds_for_other_extension_weights() {
    for weights in [
        ExtensionWeights::Unit,
        ExtensionWeights::Custom(vec![1.0, 0.3, 2.0]),
    ] {
        let cfg = OracleConfig::numbered(2, 4, 3)
            .unwrap()
            .with_weights(weights)
            .unwrap();
        let gens = build_generators(&cfg).unwrap();
        for c in algebra_checks(&gens)
            .into_iter()
            .filter(|c| !c.name.starts_with("sum"))
        {
            assert!(c.passed(), "{c:?}");
        }
    }
}

#[test]
fn idempotence_witness_value() {
    // on |λ⟩|μ⟩ with λ ≠ μ, 𝟙_λ acts as c_2² = 1/2
    let cfg = OracleConfig::numbered(2, 2, 2).unwrap();
    let d = idempotence_defect(&build_generators(&cfg).unwrap());
    assert!((d - 0.25).abs() < 1e-15);
}

#[test]
fn hamiltonians_are_hermitian_and_split_by_sector() {
    let cfg = OracleConfig::numbered(2, 4, 2).unwrap();
    let (hs, hb) = hamiltonians(&cfg).unwrap();
    assert!(hs.hermiticity_defect() < 1e-12);
    assert!(hb.hermiticity_defect() < 1e-12);
    assert_eq!(hs.blocks().len(), 2);
    assert!((hs.block(1) - hb.block(1)).iter().all(|z| z.norm() < 1e-14));
}

#[test]
fn script_hamiltonian_sector_is_sum_of_one_oscillator_terms() {
    let cfg = OracleConfig::numbered(2, 3, 2).unwrap();
    let (hs, _) = hamiltonians(&cfg).unwrap();
    let h1 = hs.block(1).clone();
    let id = nalgebra::DMatrix::<C64>::identity(h1.nrows(), h1.ncols());
    let expected = h1.kronecker(&id) + id.kronecker(&h1);
    assert!((hs.block(2) - expected).iter().all(|z| z.norm() < 1e-13));
}

#[test]
fn heisenberg_phases_for_random_times() {
    let cfg = OracleConfig::numbered(2, 4, 2).unwrap();
    let probe = HeisenbergProbe::new(&cfg).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let t = rng.gen_range(-10.0..10.0);
        for id in ["k1", "k2"] {
            let id = ModeId::from(id);
            assert!(probe.deviation(&id, t, Evolution::Script, false).unwrap() < 1e-8);
            assert!(probe.deviation(&id, t, Evolution::Bold, true).unwrap() < 1e-8);
        }
    }
}

#[test]
fn coherent_states_are_eigenvectors() {
    let cfg = OracleConfig::numbered(2, 12, 2).unwrap();
    let gens = build_generators(&cfg).unwrap();
    let k2 = ModeId::from("k2");
    for alpha in [C64::new(0.5, 0.0), C64::new(0.0, -0.5), C64::new(0.3, 0.35)] {
        let s =
            coherent_state(&cfg, &k2, alpha, &[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        assert!(eigen_residual(&gens, &k2, alpha, &s).unwrap() < 1e-6);
        // other modes annihilate it
        assert!(eigen_residual(&gens, &"k1".into(), C64::new(0.0, 0.0), &s).unwrap() < 1e-15);
    }
}

#[test]
fn coherent_energies_match_closed_forms_for_unit_weights() {
    let cfg = OracleConfig::numbered(2, 10, 3)
        .unwrap()
        .with_weights(ExtensionWeights::Unit)
        .unwrap();
    let gens = build_generators(&cfg).unwrap();
    let alpha = C64::new(0.2, 0.1);
    let f = [C64::new(0.5, 0.0), C64::new(0.5, 0.5), C64::new(0.0, 0.5)];
    let s = coherent_state(&cfg, &"k2".into(), alpha, &f).unwrap();
    let (script, bold) = energies(&gens, &s);
    let omega = 2.0;
    let a2 = alpha.norm_sqr();
    let mut exp_script = 0.0;
    let mut exp_bold = omega * a2;
    for (i, z) in f.iter().enumerate() {
        let n = (i + 1) as f64;
        exp_script += omega * a2 * z.norm_sqr() / n + 0.5 * omega * n * z.norm_sqr();
        exp_bold += 0.5 * omega * n * z.norm_sqr();
    }
    assert!((script - exp_script).abs() < 1e-8, "{script} {exp_script}");
    assert!((bold - exp_bold).abs() < 1e-8, "{bold} {exp_bold}");
}

#[test]
fn vacuum_energy_with_geometric_distribution() {
    let cfg = OracleConfig::numbered(3, 2, 3).unwrap();
    let gens = build_generators(&cfg).unwrap();
    let p = VacuumSpec::truncated_geometric(0.5, 3).unwrap();
    let profile = [
        ("k1", C64::new(0.5, 0.0)),
        ("k2", C64::new(0.5, 0.5)),
        ("k3", C64::new(0.0, 0.5)),
    ];
    let vac = VacuumSpec::from_pairs(p.clone(), profile, false).unwrap();
    let h_bar = 0.5 * (0.25 * 1.0 + 0.5 * 2.0 + 0.25 * 3.0);
    let n_bar: f64 = p.iter().map(|(n, q)| *n as f64 * q).sum();
    let (script, bold) = vacuum_energies(&gens, &vac).unwrap();
    assert!((script - n_bar * h_bar).abs() < 1e-13);
    assert!((bold - h_bar).abs() < 1e-13);
}

fn unit_vec(v: [f64; 3]) -> [C64; 3] {
    v.map(|x| C64::new(x, 0.0))
}

#[test]
fn field_averages_follow_the_classical_form() {
    let mut cfg = OracleConfig::numbered(2, 14, 1).unwrap();
    cfg.modes[1].omega = 1.0;
    let gens = build_generators(&cfg).unwrap();
    let geometry = FieldGeometry {
        volume: 2.5,
        modes: BTreeMap::from([
            (
                ModeId::from("k1"),
                ModeGeometry {
                    kappa: [0.0, 0.0, 1.0],
                    polarization: unit_vec([1.0, 0.0, 0.0]),
                },
            ),
            (
                ModeId::from("k2"),
                ModeGeometry {
                    kappa: [1.0, 0.0, 0.0],
                    polarization: [
                        C64::new(0.0, 0.0),
                        C64::new(0.5f64.sqrt(), 0.0),
                        C64::new(0.0, 0.5f64.sqrt()),
                    ],
                },
            ),
        ]),
    };
    let modes = [
        (ModeId::from("k1"), C64::new(0.6, 0.0), C64::new(0.7, -0.2)),
        (ModeId::from("k2"), C64::new(0.0, 0.8), C64::new(-0.4, 0.5)),
    ];
    let state = mode_superposition(&cfg, &modes).unwrap();
    let (t, x) = (0.9, [0.3, -1.2, 0.4]);
    let got = field_averages(&gens, &geometry, &state, t, x).unwrap();
    let mut a = [0.0; 3];
    let mut e = [0.0; 3];
    let mut b = [0.0; 3];
    for (id, phi, alpha) in &modes {
        let g = &geometry.modes[id];
        let omega = 1.0;
        let kx = omega * t - g.kappa.iter().zip(&x).map(|(k, x)| k * x).sum::<f64>();
        let phase = C64::from_polar(1.0, -kx);
        let w = phi.norm_sqr();
        for c in 0..3 {
            let term = alpha * phase * g.polarization[c];
            a[c] += w * (1.0 / (2.0 * omega * geometry.volume)).sqrt() * (term + term.conj()).re;
            // with the leading i of the operator definition
            e[c] +=
                w * (omega / (2.0 * geometry.volume)).sqrt() * (C64::i() * (term - term.conj())).re;
        }
        let n = g.kappa;
        let e_mode = g.polarization.map(|pol| {
            let term = alpha * phase * pol;
            C64::i() * (term - term.conj()) * (w * (omega / (2.0 * geometry.volume)).sqrt())
        });
        let cross = [
            n[1] * e_mode[2] - n[2] * e_mode[1],
            n[2] * e_mode[0] - n[0] * e_mode[2],
            n[0] * e_mode[1] - n[1] * e_mode[0],
        ];
        for c in 0..3 {
            b[c] += cross[c].re;
        }
    }
    for c in 0..3 {
        assert!(
            (got.a[c] - a[c]).abs() < 1e-10,
            "A {c}: {} vs {}",
            got.a[c],
            a[c]
        );
        assert!((got.e[c] - e[c]).abs() < 1e-10, "E {c}");
        assert!((got.b[c] - b[c]).abs() < 1e-10, "B {c}");
    }
    assert!(got.a.iter().any(|v| v.abs() > 1e-2));
}

#[test]
fn single_mode_electric_field_amplitude() {
    let cfg = OracleConfig::numbered(1, 14, 1).unwrap();
    let gens = build_generators(&cfg).unwrap();
    let geometry = FieldGeometry {
        volume: 1.0,
        modes: BTreeMap::from([(
            ModeId::from("k1"),
            ModeGeometry {
                kappa: [0.0, 0.0, 1.0],
                polarization: unit_vec([1.0, 0.0, 0.0]),
            },
        )]),
    };
    let alpha = C64::new(0.5, 0.0);
    let state =
        mode_superposition(&cfg, &[(ModeId::from("k1"), C64::new(1.0, 0.0), alpha)]).unwrap();
    let amp = alpha.norm() * (2.0f64 * 1.0 / 1.0).sqrt();
    let mut peak: f64 = 0.0;
    for i in 0..64 {
        let t = i as f64 * std::f64::consts::TAU / 64.0;
        peak = peak.max(
            field_averages(&gens, &geometry, &state, t, [0.0; 3])
                .unwrap()
                .e[0]
                .abs(),
        );
    }
    assert!((peak - amp).abs() < 1e-10);
}

#[test]
fn hamiltonian_dump_round_trips() {
    let cfg = OracleConfig::numbered(1, 3, 2).unwrap();
    let (_, hb) = hamiltonians(&cfg).unwrap();
    let mut bytes = Vec::new();
    dump::write_matrix(&mut bytes, hb.block(2)).unwrap();
    assert_eq!(bytes.len(), 16 + 81 * 16);
    assert_eq!(&dump::read_matrix(bytes.as_slice()).unwrap(), hb.block(2));
}
