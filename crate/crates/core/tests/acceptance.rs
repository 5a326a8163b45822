//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stochnet::exactlin::{
    is_irreducible, perron_frobenius, perron_frobenius_from, symmetric_eigen, RealMatrix,
};
use stochnet::markov::{
    dirichlet_form, generate_graph, graph_laplacian, hamiltonian, is_stochastic,
    noether_check_chain, noether_check_process, GraphSpec, GraphWithRates,
};
use stochnet::masterdyn::{
    ack_state, condition_on_class, enumerate_states, enumerate_states_from, evolve, expm_action,
    ladder_hamiltonian, master_hamiltonian, moments, observable_values, point_mass, ssa_sample,
    symmetry_scale, total_variation, MasterOperator, ProductPoissonState, SsaConfig,
};
use stochnet::netcore::{parse_network, Complex, ReactionNetwork, SpeciesTable, Transition};
use stochnet::ratedyn::{deficiency_zero_equilibrium, integrate_rate, is_complex_balanced, x_pow_y};
use stochnet::structure::{build_incidence, deficiency};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

const FIVE_COMPLEX: &str = "\
A -> B @ 1
B -> A @ 1
A + C -> D @ 1
B + E -> A + C @ 1
B + E -> D @ 1
";

fn deficiency_regression() -> Outcome {
    let counts = |text: &str| -> Result<(usize, usize, usize, usize, bool), String> {
        let r = deficiency(&parse_network(text).map_err(err)?).map_err(err)?;
        Ok((r.num_complexes, r.num_components, r.stoich_dim, r.deficiency, r.weakly_reversible))
    };
    let base = counts(FIVE_COMPLEX)?;
    ensure(base == (5, 2, 3, 0, false), || format!("five-complex network gave {base:?}"))?;
    let closed = counts(&format!("{FIVE_COMPLEX}D -> B + E @ 1\n"))?;
    ensure(closed == (5, 2, 3, 0, true), || format!("with D -> B + E gave {closed:?}"))?;
    let six_a = counts("A -> B @ 1\nB -> E @ 1\nA + C -> D @ 1\nB + E -> D @ 1\nB + E -> A + C @ 1\n")?;
    ensure((six_a.0, six_a.1, six_a.2, six_a.3) == (6, 2, 4, 0), || {
        format!("first six-complex variant gave {six_a:?}")
    })?;
    let six_b = counts("A -> B @ 1\nA + C -> D @ 1\nB + E -> D @ 1\nB + E -> A + C @ 1\nE -> B + E @ 1\n")?;
    ensure((six_b.0, six_b.1, six_b.2, six_b.3) == (6, 2, 4, 0), || {
        format!("second six-complex variant gave {six_b:?}")
    })?;
    Ok("5-2-3=0, weakly reversible after D -> B + E, six-complex variants 6-2-4=0".into())
}

fn desargues_spectrum() -> Outcome {
    let g = generate_graph(GraphSpec::Desargues).map_err(err)?;
    let spectrum = symmetric_eigen(&graph_laplacian(&g)).map_err(err)?.spectrum;
    let expected = [(0.0, 1), (-1.0, 4), (-2.0, 5), (-4.0, 5), (-5.0, 4), (-6.0, 1)];
    let mut sorted = spectrum.eigenvalues.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut k = 0;
    let mut worst = 0.0f64;
    for &(value, mult) in &expected {
        for _ in 0..mult {
            worst = worst.max((sorted[k] - value).abs());
            k += 1;
        }
    }
    ensure(k == sorted.len() && worst <= 1e-8, || {
        format!("eigenvalues {sorted:?}, worst deviation {worst:e}")
    })?;
    Ok(format!("20 eigenvalues, worst deviation {worst:.1e}"))
}

fn circuit_spectrum() -> Outcome {
    let a = [
        [0.0, 2.0, 1.0, 0.0, 1.0],
        [2.0, 0.0, 0.0, 1.0, 1.0],
        [1.0, 0.0, 0.0, 2.0, 1.0],
        [0.0, 1.0, 2.0, 0.0, 1.0],
        [1.0, 1.0, 1.0, 1.0, 0.0],
    ];
    let rows: Vec<Vec<f64>> = a.iter().map(|r| r.to_vec()).collect();
    let h = RealMatrix::from_rows(&rows).map_err(err)?.shift(-4.0);
    let eig = symmetric_eigen(&h).map_err(err)?;
    let mut got = eig.spectrum.eigenvalues.clone();
    got.sort_by(|a, b| b.total_cmp(a));
    let expected = [0.0, -3.0, -7.0, -8.0, -8.0];
    let worst = max_abs_diff(&got, &expected);

    let kernel: Vec<usize> = (0..5).filter(|&k| eig.spectrum.eigenvalues[k].abs() <= 1e-8).collect();
    let kernel_ok = kernel.len() == 1 && {
        let v = eig.eigenvectors.column(kernel[0]);
        let mean = v.iter().sum::<f64>() / 5.0;
        v.iter().all(|x| (x - mean).abs() <= 1e-8)
    };
    let fmt = |v: &[f64]| {
        v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(", ")
    };
    ensure(worst <= 1e-8 && kernel_ok, || {
        format!(
            "computed spectrum {{{}}} (trace {:.6}), expected {{{}}} (trace {}); kernel spanned by (1,1,1,1,1): {kernel_ok}",
            fmt(&got),
            got.iter().sum::<f64>(),
            fmt(&expected),
            expected.iter().sum::<f64>(),
        )
    })?;
    Ok("spectrum and kernel match".into())
}

fn logistic_closed_form() -> Outcome {
    let n = parse_network("A -> 2A @ 1\n2A -> A @ 1").map_err(err)?;
    let (q, k) = (1.0, 1.0);
    let mut details = Vec::new();
    for p0 in [2.0, 1.0, 0.25] {
        let a = (q - p0) / p0;
        let traj = integrate_rate(&n, &[p0], 10.0, 1e-3).map_err(err)?;
        let worst = traj
            .times
            .iter()
            .zip(&traj.states)
            .map(|(t, x)| (x[0] - q / (1.0 + a * (-k * t).exp())).abs())
            .fold(0.0, f64::max);
        ensure(worst < 1e-6, || format!("A = {a}: max error {worst:e}"))?;
        details.push(format!("A={a}: {worst:.1e}"));
    }
    Ok(format!("max abs error {}", details.join(", ")))
}

fn diatomic_rate_limit() -> Outcome {
    let n = parse_network("species A B\nB -> 2A @ 1\n2A -> B @ 1").map_err(err)?;
    let mut ratios = Vec::new();
    for x0 in [[0.0, 3.0], [4.0, 0.0], [3.0, 3.0]] {
        let traj = integrate_rate(&n, &x0, 20.0, 1e-3).map_err(err)?;
        let x = traj.final_state();
        let ratio = x[0] * x[0] / x[1];
        ensure((ratio - 1.0).abs() <= 1e-4, || format!("from {x0:?}: x1^2/x2 = {ratio}"))?;
        ratios.push(format!("{ratio:.10}"));
    }
    Ok(format!("x1^2/x2 at t=20: {}", ratios.join(", ")))
}

fn random_rates(text: &str, rng: &mut ChaCha8Rng) -> Result<ReactionNetwork, String> {
    let n = parse_network(text).map_err(err)?;
    let transitions = n
        .transitions()
        .iter()
        .map(|t| Transition {
            source: t.source,
            target: t.target,
            rate: rng.random_range(0.2..5.0),
        })
        .collect();
    ReactionNetwork::new(n.species().clone(), n.complexes().to_vec(), transitions).map_err(err)
}

fn deficiency_zero_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut suite: Vec<(&str, ReactionNetwork)> = vec![
        ("diatomic", parse_network("species A B\nB -> 2A @ 1\n2A -> B @ 1").map_err(err)?),
        ("isomerization", parse_network("A -> B @ 1\nB -> A @ 2").map_err(err)?),
    ];
    let texts = [
        ("five-complex closed", format!("{FIVE_COMPLEX}D -> B + E @ 1\n")),
        ("five-complex reversed", format!("{FIVE_COMPLEX}D -> A + C @ 1\nD -> B + E @ 1\nA + C -> B + E @ 1\n")),
        ("amoeba", "A -> 2A @ 1\n2A -> A @ 1\n".into()),
        ("binding", "A + B -> C @ 1\nC -> A + B @ 1\n".into()),
        ("cycle", "A -> B @ 1\nB -> C @ 1\nC -> A @ 1\n".into()),
        ("inflow", "0 -> A @ 1\nA -> 0 @ 1\n".into()),
        ("dimer chain", "2A -> B @ 1\nB -> 2A @ 1\nB -> C @ 1\nC -> B @ 1\n".into()),
        ("two blocks", "A -> B @ 1\nB -> C @ 1\nC -> A @ 1\nA + D -> E @ 1\nE -> A + D @ 1\n".into()),
        ("exchange", "A + B -> C @ 1\nC -> A + B @ 1\nC -> D + E @ 1\nD + E -> C @ 1\n".into()),
        ("six-complex", "A -> B @ 1\nB -> A @ 1\nB -> E @ 1\nE -> B @ 1\nA + C -> D @ 1\nD -> A + C @ 1\nB + E -> D @ 1\nD -> B + E @ 1\n".into()),
    ];
    for (name, text) in &texts {
        suite.push((name, random_rates(text, &mut rng)?));
    }
    suite.push(("five-complex reversed, fresh rates", random_rates(&texts[1].1, &mut rng)?));

    let mut worst = 0.0f64;
    for (name, n) in &suite {
        let r = deficiency(n).map_err(err)?;
        ensure(r.weakly_reversible && r.deficiency == 0, || {
            format!("{name}: weakly reversible {}, deficiency {}", r.weakly_reversible, r.deficiency)
        })?;
        let eq = deficiency_zero_equilibrium(n, 1e-9).map_err(|e| format!("{name}: {e}"))?;
        ensure(eq.x.iter().all(|&v| v > 0.0), || format!("{name}: x = {:?}", eq.x))?;
        let h = hamiltonian(&GraphWithRates::from_network(n)).map_err(err)?;
        let xy = x_pow_y(&eq.x, &build_incidence(n).y_mat);
        let residual = h.matvec(&xy).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let rel = residual / h.norm_inf();
        worst = worst.max(rel);
        ensure(rel <= 1e-9, || format!("{name}: ‖H x^Y‖∞/‖H‖∞ = {rel:e}"))?;
        ensure(is_complex_balanced(n, &eq.x, 1e-8).map_err(err)?, || {
            format!("{name}: not complex balanced")
        })?;
    }
    Ok(format!("{} networks, worst relative residual {worst:.1e}", suite.len()))
}

fn poisson_process() -> Outcome {
    let n = parse_network("species X\n0 -> X @ 1").map_err(err)?;
    let space = enumerate_states(&n, &[0], 60).map_err(err)?;
    let h = master_hamiltonian(&n, &space);
    let psi = evolve(&h, &point_mass(&space, &[0]).map_err(err)?, 1.0).map_err(err)?.psi;
    let mut sup = 0.0f64;
    for (state, p) in space.states().iter().zip(&psi) {
        let k = state[0];
        let ln_fact: f64 = (1..=k).map(|j| f64::from(j).ln()).sum();
        let want = (-1.0 - ln_fact).exp();
        sup = sup.max((p - want).abs());
    }
    let mean = moments(&space, &psi, &[1.0], 1).map_err(err)?;
    ensure(sup <= 1e-9 && (mean - 1.0).abs() <= 1e-8, || {
        format!("sup error {sup:e}, mean {mean}")
    })?;
    Ok(format!("sup error {sup:.1e}, mean error {:.1e}", (mean - 1.0).abs()))
}

fn exponential_death() -> Outcome {
    let n = parse_network("X -> 0 @ 1").map_err(err)?;
    let space = enumerate_states(&n, &[10], 10).map_err(err)?;
    ensure(space.is_closed(), || "space is not closed".into())?;
    let h = master_hamiltonian(&n, &space);
    let psi0 = point_mass(&space, &[10]).map_err(err)?;
    let mut worst = 0.0f64;
    for t in [0.5, 1.0, 2.0] {
        let psi = evolve(&h, &psi0, t).map_err(err)?.psi;
        let mean = moments(&space, &psi, &[1.0], 1).map_err(err)?;
        let d = (mean - 10.0 * (-t).exp()).abs();
        worst = worst.max(d);
        ensure(d <= 1e-6, || format!("t = {t}: mean {mean}"))?;
    }
    Ok(format!("worst mean error {worst:.1e}"))
}

fn ack_exactness() -> Outcome {
    let n = parse_network("species A B\nB -> 2A @ 1\n2A -> B @ 1").map_err(err)?;
    let space = enumerate_states(&n, &[10, 0], 10).map_err(err)?;
    ensure(space.is_closed(), || "class space is not closed".into())?;
    let psi = ack_state(&n, &[1.0, 1.0], &space, 1e-9).map_err(err)?;
    let h = master_hamiltonian(&n, &space);
    let residual = h.apply(&psi).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let rel = residual / h.norm_inf();
    ensure(rel <= 1e-12, || format!("‖Hψ‖∞/‖H‖∞ = {rel:e}"))?;

    let iso = parse_network("A -> B @ 1\nB -> A @ 2").map_err(err)?;
    let total = 10u32;
    let seeds: Vec<Vec<u32>> = (0..=total).map(|k| vec![k, 0]).collect();
    let iso_space = enumerate_states_from(&iso, &seeds, u64::from(total)).map_err(err)?;
    let x = [2.0, 1.0];
    let ack = ack_state(&iso, &x, &iso_space, 1e-9).map_err(err)?;
    let cond = condition_on_class(&iso_space, &ack, &[1, 1], i64::from(total)).map_err(err)?;
    let p = x[0] / (x[0] + x[1]);
    let oracle: Vec<f64> = iso_space
        .states()
        .iter()
        .map(|s| {
            if s[0] + s[1] != total {
                return 0.0;
            }
            let k = s[0];
            let binom: f64 = (0..k).map(|j| f64::from(total - j) / f64::from(j + 1)).product();
            binom * p.powi(k as i32) * (1.0 - p).powi((total - k) as i32)
        })
        .collect();
    let tv = total_variation(&cond, &oracle);
    ensure(tv <= 1e-12, || format!("binomial TV {tv:e}"))?;
    Ok(format!("relative residual {rel:.1e}, binomial TV {tv:.1e}"))
}

fn noether() -> Outcome {
    let o = [0.0, 1.0, 2.0];
    let u = RealMatrix::from_rows(&[
        vec![1.0, 0.5, 0.0],
        vec![0.0, 0.0, 0.0],
        vec![0.0, 0.5, 1.0],
    ])
    .map_err(err)?;
    let chain = noether_check_chain(&u, &o, 1e-9).map_err(err)?;
    let g = GraphWithRates::new(
        3,
        vec![
            stochnet::markov::Edge { source: 1, target: 0, rate: 0.5 },
            stochnet::markov::Edge { source: 1, target: 2, rate: 0.5 },
        ],
    )
    .map_err(err)?;
    let process = noether_check_process(&hamiltonian(&g).map_err(err)?, &o, 1e-9).map_err(err)?;
    for (what, r) in [("chain", &chain), ("process", &process)] {
        ensure(r.first_moment_conserved && !r.second_moment_conserved && !r.commutes, || {
            format!("{what} counterexample gave {r:?}")
        })?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut commuting = 0;
    for _ in 0..500 {
        let n = rng.random_range(2..=5);
        let mut h = RealMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.random_bool(0.3) {
                    h[(i, j)] = rng.random_range(0.1..3.0);
                }
            }
        }
        for j in 0..n {
            let s: f64 = (0..n).filter(|&i| i != j).map(|i| h[(i, j)]).sum();
            h[(j, j)] = -s;
        }
        let o: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(0u8..3))).collect();
        let r = noether_check_process(&h, &o, 1e-9).map_err(err)?;
        ensure(r.commutes == (r.first_moment_conserved && r.second_moment_conserved), || {
            format!("biconditional fails for {:?} with O = {o:?}", h.to_rows())
        })?;
        commuting += usize::from(r.commutes);
    }
    Ok(format!("counterexamples behave; 500 random pairs agree ({commuting} commuting)"))
}

fn symmetry() -> Outcome {
    let n = parse_network("species A B\nB -> 2A @ 1\n2A -> B @ 1").map_err(err)?;
    let top = 12u32;
    let seeds: Vec<Vec<u32>> = (0..=top).map(|k| vec![k, 0]).collect();
    let space = enumerate_states_from(&n, &seeds, u64::from(top)).map_err(err)?;
    ensure(space.is_closed(), || "space is not closed".into())?;
    let s = 0.3;
    let o = observable_values(&space, &[1.0, 2.0]);
    let ack = |x: [f64; 2]| ProductPoissonState::new(x.to_vec()).and_then(|p| p.distribution(&space));
    let base = ack([1.0, 1.0]).map_err(err)?;
    let scaled = symmetry_scale(&space, &base, &o, s).map_err(err)?;
    let target = ack([s.exp(), (2.0 * s).exp()]).map_err(err)?;
    let tv_ack = total_variation(&scaled, &target);
    ensure(tv_ack <= 1e-10, || format!("exp(sO) ACK(1,1) vs ACK(e^s, e^2s): TV {tv_ack:e}"))?;

    let h = master_hamiltonian(&n, &space);
    let psi0 = vec![1.0 / space.len() as f64; space.len()];
    let a = symmetry_scale(&space, &evolve(&h, &psi0, 1.0).map_err(err)?.psi, &o, s).map_err(err)?;
    let b = evolve(&h, &symmetry_scale(&space, &psi0, &o, s).map_err(err)?, 1.0).map_err(err)?.psi;
    let tv_comm = total_variation(&a, &b);
    ensure(tv_comm <= 1e-8, || format!("commutation with evolve: TV {tv_comm:e}"))?;
    Ok(format!("ACK TV {tv_ack:.1e}, commutation TV {tv_comm:.1e}"))
}

fn random_generator(rng: &mut ChaCha8Rng, n: usize, symmetric: bool) -> RealMatrix {
    let mut h = RealMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i == j || (symmetric && j < i) {
                continue;
            }
            if rng.random_bool(0.6) {
                let w = rng.random_range(0.05..4.0);
                h[(i, j)] = w;
                if symmetric {
                    h[(j, i)] = w;
                }
            }
        }
    }
    for j in 0..n {
        let s: f64 = (0..n).filter(|&i| i != j).map(|i| h[(i, j)]).sum();
        h[(j, j)] = -s;
    }
    h
}

fn to_nalgebra(m: &RealMatrix) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);

    // Perron–Frobenius against a dense eigen oracle
    let mut pf_count = 0;
    while pf_count < 200 {
        let n = rng.random_range(1..=6);
        let mut t = RealMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if rng.random_bool(0.5) {
                    t[(i, j)] = rng.random_range(0.0..3.0);
                }
            }
        }
        if !is_irreducible(&t, 0.0) {
            continue;
        }
        pf_count += 1;
        let pf = perron_frobenius(&t).map_err(err)?;
        let eigs = to_nalgebra(&t).complex_eigenvalues();
        let spectral_radius = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        ensure((pf.r - spectral_radius).abs() <= 1e-8 * spectral_radius.max(1.0), || {
            format!("PF r = {} but spectral radius {spectral_radius}", pf.r)
        })?;
        ensure(
            eigs.iter().any(|z| (z.re - pf.r).abs() <= 1e-8 * pf.r.max(1.0) && z.im.abs() <= 1e-8),
            || format!("PF r = {} is not an eigenvalue", pf.r),
        )?;
        ensure(pf.v.iter().all(|&x| x > 0.0), || format!("PF vector {:?}", pf.v))?;
        let start: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
        let other = perron_frobenius_from(&t, &start).map_err(err)?;
        ensure(max_abs_diff(&pf.v, &other.v) <= 1e-8, || "PF vector depends on start".into())?;
    }

    // Dirichlet form identity
    for _ in 0..200 {
        let n = rng.random_range(1..=6);
        let h = random_generator(&mut rng, n, true);
        let psi: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let form = dirichlet_form(&h, &psi).map_err(err)?;
        let mut power = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    power += h[(i, j)] * (psi[i] - psi[j]).powi(2);
                }
            }
        }
        let rhs = -0.5 * power;
        ensure(form <= 1e-12 * rhs.abs().max(1.0), || format!("⟨ψ,Hψ⟩ = {form} > 0"))?;
        ensure((form - rhs).abs() <= 1e-10 * rhs.abs().max(1.0), || {
            format!("Dirichlet identity: {form} vs {rhs}")
        })?;
    }

    // stochastic closure of exp(tH)
    for _ in 0..100 {
        let n = rng.random_range(1..=6);
        let h = random_generator(&mut rng, n, false);
        let op = MasterOperator::from_dense(&h, 1e-12).map_err(err)?;
        for t in [0.1, 1.0, 10.0] {
            let cols: Vec<Vec<f64>> = (0..n)
                .map(|j| {
                    let mut e = vec![0.0; n];
                    e[j] = 1.0;
                    expm_action(&op, &e, t).map(|r| r.0)
                })
                .collect::<Result<_, _>>()
                .map_err(err)?;
            let u = RealMatrix::from_rows(&cols).map_err(err)?.transpose();
            ensure(u.data().iter().all(|&x| x >= -1e-12) && is_stochastic(&u, 1e-9), || {
                format!("exp({t}H) is not stochastic")
            })?;
        }
    }

    // 0/1 stochastic matrices with stochastic inverses are permutations
    let mut checked = 0;
    for n in 1..=3usize {
        for code in 0..n.pow(n as u32) {
            let mut u = RealMatrix::zeros(n, n);
            let mut c = code;
            for j in 0..n {
                u[(c % n, j)] = 1.0;
                c /= n;
            }
            let permutation = (0..n).all(|i| (0..n).any(|j| u[(i, j)] == 1.0));
            let inverse_stochastic = to_nalgebra(&u).try_inverse().is_some_and(|inv| {
                let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| inv[(i, j)]).collect()).collect();
                RealMatrix::from_rows(&rows).is_ok_and(|m| is_stochastic(&m, 1e-12))
            });
            ensure(inverse_stochastic == permutation, || format!("{:?}", u.to_rows()))?;
            checked += 1;
        }
    }

    // ladder operators reproduce the entrywise master Hamiltonian
    for trial in 0..50 {
        let n = random_network(&mut rng);
        let n0: Vec<u32> = (0..n.num_species()).map(|_| rng.random_range(0..=3)).collect();
        let cap = n0.iter().map(|&c| u64::from(c)).sum::<u64>() + rng.random_range(0..=3);
        let space = enumerate_states(&n, &n0, cap).map_err(err)?;
        let entrywise = master_hamiltonian(&n, &space).to_dense();
        ensure(entrywise == ladder_hamiltonian(&n, &space), || {
            format!("network {trial}: ladder and entrywise operators differ")
        })?;
    }
    Ok(format!(
        "{pf_count} PF, 200 Dirichlet, 100 exp(tH), {checked} 0/1 matrices, 50 ladder networks"
    ))
}

fn random_network(rng: &mut ChaCha8Rng) -> ReactionNetwork {
    let s = rng.random_range(1..=3);
    let k = rng.random_range(1..=5);
    let names: Vec<String> = (0..s).map(|i| format!("S{i}")).collect();
    let species = SpeciesTable::from_names(names.iter().map(String::as_str)).unwrap();
    let mut complexes: Vec<Vec<u32>> = Vec::new();
    while complexes.len() < k {
        let c: Vec<u32> = (0..s).map(|_| rng.random_range(0..=2)).collect();
        if !complexes.contains(&c) {
            complexes.push(c);
        }
        if complexes.len() == 3usize.pow(s as u32) {
            break;
        }
    }
    let k = complexes.len();
    let transitions = (0..rng.random_range(1..=6))
        .map(|_| Transition {
            source: rng.random_range(0..k),
            target: rng.random_range(0..k),
            rate: rng.random_range(0.1..5.0),
        })
        .collect();
    ReactionNetwork::new(species, complexes.into_iter().map(Complex).collect(), transitions).unwrap()
}

fn ssa_vs_master() -> Outcome {
    let n = parse_network("species A B\nB -> 2A @ 1\n2A -> B @ 1").map_err(err)?;
    let n0 = [10u32, 0];
    let space = enumerate_states(&n, &n0, 10).map_err(err)?;
    let h = master_hamiltonian(&n, &space);
    let exact = evolve(&h, &point_mass(&space, &n0).map_err(err)?, 5.0).map_err(err)?.psi;

    let config = SsaConfig { t_end: 5.0, seed: 13, trials: 10_000, bins: 10, threads: 1 };
    let run = ssa_sample(&n, &n0, config).map_err(err)?;
    let mut empirical = vec![0.0; space.len()];
    for state in &run.end_states {
        let i = space.index_of(state).ok_or_else(|| format!("SSA left the class: {state:?}"))?;
        empirical[i] += 1.0 / config.trials as f64;
    }
    let tv = total_variation(&empirical, &exact);
    let bound = 4.0 / (config.trials as f64).sqrt() + 0.01;
    ensure(tv <= bound, || format!("TV {tv} > {bound}"))?;

    let serialize = |r: &stochnet::masterdyn::SsaResult| {
        serde_json::to_string(&(r.summary(), &r.end_states, &r.bin_means)).unwrap()
    };
    let first = serialize(&run);
    let again = serialize(&ssa_sample(&n, &n0, config).map_err(err)?);
    let threaded = serialize(&ssa_sample(&n, &n0, SsaConfig { threads: 4, ..config }).map_err(err)?);
    ensure(first == again && first == threaded, || "reruns are not byte-identical".into())?;
    Ok(format!("TV {tv:.4} (bound {bound}), reruns byte-identical"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("deficiency regression", deficiency_regression),
        ("Desargues spectrum", desargues_spectrum),
        ("weighted circuit spectrum", circuit_spectrum),
        ("logistic closed form", logistic_closed_form),
        ("diatomic rate limit", diatomic_rate_limit),
        ("deficiency-zero solver", deficiency_zero_suite),
        ("Poisson process", poisson_process),
        ("exponential death", exponential_death),
        ("ACK exactness", ack_exactness),
        ("Noether counterexample", noether),
        ("scaling symmetry", symmetry),
        ("property suites", property_suites),
        ("SSA vs master", ssa_vs_master),
    ];
    let start = Instant::now();
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", k + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.2}s)", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed in {:.1}s",
        criteria.len() - failures,
        start.elapsed().as_secs_f64()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
