// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

use clap::ValueEnum;
use lindfit::cp::{cp_filter_with_mass, cp_penalty, dissipator_from_lindblads, Supergenerator};
use lindfit::estimators::{
    cp_constrained_fit, eigenlog_average_estimate, naive_log_estimate, richardson_estimate, FitConfig, Structure,
    TomographyDataset,
};
use lindfit::hadamard::{decompose, model_superoperator, DecompositionOptions, MergeOptions, RelaxationDecomposition};
use lindfit::liouville::matrix::{self, ComplexMatrix};
use lindfit::liouville::{two_spin_hamiltonian, BasisKind, OperatorBasis, TwoSpinHamiltonian};
use lindfit::matfun::hermitian_eigenvalues;
use lindfit::synth::{
    add_noise, random_cp_generator, random_secular_kite_generator, simulate_propagators, simulate_state_pairs,
    NoiseSpec, NoiseTarget,
};
use lindfit::{fixtures, Error};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::{
    BasisArg, Cli, Command, ConvertArgs, DecomposeArgs, EstimateArgs, FilterArgs, GenerateArgs, GeneratorKind, Method,
    SimulateArgs, StructureArg,
};
use crate::config::{pick, FileConfig, DEFAULT_TIMES};
use crate::error::{CliError, CliResult};
use crate::io::{emit, read_input, InputDoc};
use crate::manifest::ManifestBuilder;
use crate::table::{fixed, sci, Table};

const GENERATOR_KEYS: &[&[&str]] = &[&["generator"], &["report", "generator"]];

pub fn run(cli: Cli) -> CliResult<()> {
    let file = FileConfig::load(cli.config.as_deref())?;
    let out = cli.output.as_deref();
    match cli.command {
        Command::Generate(a) => generate(a, &file, out),
        Command::Simulate(a) => simulate(a, &file, out),
        Command::Estimate(a) => estimate(a, &file, out),
        Command::Decompose(a) => decompose_cmd(a, &file, out),
        Command::FilterCp(a) => filter_cp(a, out),
        Command::Convert(a) => convert(a, &file, out),
    }
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("output types serialize")
}

fn default_basis(n: usize) -> BasisArg {
    if n == 4 {
        BasisArg::Transition
    } else {
        BasisArg::Cartesian
    }
}

/// Relaxation matrix as printed: scaled to the basis's report scale.
fn displayed_relaxation(g: &Supergenerator) -> ComplexMatrix {
    g.relaxation_part.scale(g.basis.report_scale())
}

fn generator_table(t: &mut Table, g: &Supergenerator) {
    t.heading(&format!("relaxation supermatrix ({} basis, 1/s)", g.basis));
    t.complex_matrix(&displayed_relaxation(g));
    if let Ok(dev) = g.trace_deviation() {
        t.row("trace deviation", sci(dev));
    }
    if let Ok(p) = cp_penalty(g) {
        t.row("cp penalty", sci(p));
    }
}

fn generate(a: GenerateArgs, file: &FileConfig, out: Option<&Path>) -> CliResult<()> {
    let m = ManifestBuilder::start("generate");
    let seed = pick(a.seed, file.seed, 0);
    let g = match a.kind {
        GeneratorKind::Cp => random_cp_generator(a.n, a.lindblads, a.rate_scale, seed)?,
        GeneratorKind::Secular => {
            random_secular_kite_generator(&two_spin_hamiltonian(TwoSpinHamiltonian::DIBROMOTHIOPHENE), a.rate_scale, seed)?
        }
        GeneratorKind::Reference => fixtures::reference_generator()?,
        GeneratorKind::Zero => {
            let d = a.n * a.n;
            Supergenerator::new(a.n, ComplexMatrix::zeros(d, d), ComplexMatrix::zeros(d, d), BasisKind::Zeeman)?
        }
    };
    let config = json!({
        "kind": value_name(a.kind),
        "n": a.n,
        "lindblads": a.lindblads,
        "rate_scale": a.rate_scale,
        "seed": seed,
    });
    let mut t = Table::new();
    t.heading(&format!("generator ({}, n = {})", value_name(a.kind), g.n));
    generator_table(&mut t, &g);
    let doc = crate::io::envelope(&m.finish(config), "generator", to_value(&g));
    emit(out, &doc, &t.finish())
}

fn simulate(a: SimulateArgs, file: &FileConfig, out: Option<&Path>) -> CliResult<()> {
    let mut m = ManifestBuilder::start("simulate");
    let g: Supergenerator = read_input(&a.generator, &mut m)?.payload(GENERATOR_KEYS)?;
    let times = pick(a.times, file.times.clone(), DEFAULT_TIMES.to_vec());
    let sigma = pick(a.noise_sigma, file.noise_sigma, 0.0);
    let seed = pick(a.seed, file.seed, 0);
    let basis = pick(a.basis, file.basis, default_basis(g.n));
    let clean = simulate_propagators(&g, &times)?;
    let (ds, target) = if a.state_pairs {
        let b = OperatorBasis::new(basis.into(), g.n)?;
        let sets = times.iter().map(|&t| simulate_state_pairs(&g, t, &b)).collect::<lindfit::Result<Vec<_>>>()?;
        let ds = TomographyDataset::from_state_pairs(clean.hamiltonian.clone(), times.clone(), sets)?;
        (ds, NoiseTarget::DensityMatrices)
    } else {
        (clean, NoiseTarget::Propagators)
    };
    let ds = add_noise(&ds, NoiseSpec { sigma, seed, target })?;
    let config = json!({
        "times": times,
        "noise_sigma": sigma,
        "seed": seed,
        "state_pairs": a.state_pairs,
        "input_basis": a.state_pairs.then(|| value_name(basis)),
    });
    let mut t = Table::new();
    t.heading("simulated dataset")
        .row("dimension", ds.n)
        .row("times (s)", times.iter().map(|&x| fixed(x)).collect::<Vec<_>>().join(", "))
        .row("records", if a.state_pairs { "state pairs" } else { "propagators" })
        .row("noise sigma", fixed(sigma))
        .row("seed", seed)
        .row("doubling grid", ds.is_doubling_grid());
    let doc = crate::io::envelope(&m.finish(config), "dataset", to_value(&ds));
    emit(out, &doc, &t.finish())
}

#[derive(Debug, Serialize, Deserialize)]
struct DiagonalRate {
    element: String,
    rate: f64,
    /// `1 / rate`, only for positive rates.
    time: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FitDetails {
    objective_chi_squared: f64,
    penalty_at_solution: f64,
    penalty_weight: f64,
    iterations: usize,
    evaluations: usize,
    converged: bool,
    seed_chi_squared: f64,
    seed_penalty: f64,
    parameters: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct EstimateReport {
    method: Method,
    generator: Supergenerator,
    times: Vec<f64>,
    /// Sum over times of the squared Frobenius residuals.
    chi_squared: f64,
    /// Frobenius residual `‖P_m − exp(−G t_m)‖` per time.
    residual_per_time: Vec<f64>,
    cp_penalty: Option<f64>,
    diagonal_rates: Vec<DiagonalRate>,
    warnings: Vec<String>,
    fit: Option<FitDetails>,
}

fn element_label(kind: BasisKind, n: usize, k: usize) -> String {
    match kind {
        BasisKind::Zeeman => format!("|{}><{}|", k % n, k / n),
        _ => format!("element {k}"),
    }
}

fn diagonal_rates(g: &Supergenerator) -> Vec<DiagonalRate> {
    let d = displayed_relaxation(g);
    // The identity element of a Hermitian basis never relaxes.
    let skip = usize::from(g.basis != BasisKind::Zeeman);
    (skip..d.nrows())
        .map(|k| {
            let rate = d[(k, k)].re;
            DiagonalRate { element: element_label(g.basis, g.n, k), rate, time: (rate > 0.0).then(|| 1.0 / rate) }
        })
        .collect()
}

/// Largest rotation angle `(E_max − E_min) t` over the dataset at the chosen time.
fn aliasing_warning(ds: &TomographyDataset, index: usize) -> Option<String> {
    let e = hermitian_eigenvalues(&ds.hamiltonian);
    let spread = e.first()? - e.last()?;
    let t = *ds.times.get(index)?;
    let phase = spread * t;
    (phase > std::f64::consts::PI).then(|| {
        format!(
            "rotation angle {phase:.1} rad at t = {t} s exceeds pi: the principal logarithm aliases the \
             coherent evolution and the relaxation estimate is unreliable (use richardson, eiglog or cpfit)"
        )
    })
}

fn estimate(a: EstimateArgs, file: &FileConfig, out: Option<&Path>) -> CliResult<()> {
    let mut m = ManifestBuilder::start("estimate");
    let ds: TomographyDataset = read_input(&a.dataset, &mut m)?.payload(&[&["dataset"]])?;
    ds.validate()?;
    let method = pick(a.method, file.method, Method::Cpfit);
    let basis = pick(a.basis, file.basis, default_basis(ds.n));
    let default_structure = if ds.n == 4 { StructureArg::Kite } else { StructureArg::Full };
    let structure = pick(a.structure, file.structure, default_structure);
    let defaults = FitConfig::default();
    let cfg = FitConfig {
        structure: Structure::from(structure),
        penalty_weight: a.penalty_weight.or(file.penalty_weight),
        max_iterations: pick(a.max_iter, file.max_iter, defaults.max_iterations),
        simplex_tolerance: pick(a.tol, file.tol, defaults.simplex_tolerance),
        ..defaults
    };

    let mut warnings = Vec::new();
    let mut fit = None;
    let est = match method {
        Method::Logm => {
            warnings.extend(aliasing_warning(&ds, a.time_index));
            naive_log_estimate(&ds, a.time_index)?.estimate
        }
        Method::Richardson => richardson_estimate(&ds)?,
        Method::Eiglog => eigenlog_average_estimate(&ds)?,
        Method::Cpfit => {
            cfg.validate()?;
            let r = cp_constrained_fit(&ds, &cfg)?;
            if !r.converged {
                warnings.push(format!(
                    "simplex stopped after {} iterations without meeting tolerance {:e}",
                    r.iterations, cfg.simplex_tolerance
                ));
            }
            fit = Some(FitDetails {
                objective_chi_squared: r.chi_squared,
                penalty_at_solution: r.penalty_at_solution,
                penalty_weight: r.penalty_weight,
                iterations: r.iterations,
                evaluations: r.evaluations,
                converged: r.converged,
                seed_chi_squared: r.seed_chi_squared,
                seed_penalty: r.seed_penalty,
                parameters: r.parameters.len(),
            });
            r.estimate
        }
    };
    let est = est.to_basis(basis.into())?;
    let zee = est.to_basis(BasisKind::Zeeman)?;
    let residual_per_time = ds
        .times
        .iter()
        .zip(ds.propagators()?)
        .map(|(&t, p)| Ok((zee.propagator(t)? - p).norm()))
        .collect::<lindfit::Result<Vec<f64>>>()?;
    let chi_squared = residual_per_time.iter().map(|r| r * r).sum();
    let report = EstimateReport {
        method,
        cp_penalty: cp_penalty(&est).ok(),
        diagonal_rates: diagonal_rates(&est),
        generator: est,
        times: ds.times.clone(),
        chi_squared,
        residual_per_time,
        warnings,
        fit,
    };

    let mut config = json!({
        "method": value_name(method),
        "basis": value_name(basis),
    });
    match method {
        Method::Logm => config["time_index"] = json!(a.time_index),
        Method::Cpfit => {
            config["structure"] = json!(value_name(structure));
            config["penalty_weight"] = json!(cfg.penalty_weight);
            config["max_iter"] = json!(cfg.max_iterations);
            config["tol"] = json!(cfg.simplex_tolerance);
        }
        _ => {}
    }

    let mut t = Table::new();
    t.heading(&format!("estimate ({})", value_name(method)))
        .row("chi squared", sci(report.chi_squared))
        .row("cp penalty", report.cp_penalty.map_or("n/a".into(), sci));
    if let Some(f) = &report.fit {
        t.row("penalty weight", sci(f.penalty_weight))
            .row("iterations", f.iterations)
            .row("converged", f.converged);
    }
    t.heading("residual per time");
    for (time, r) in report.times.iter().zip(&report.residual_per_time) {
        t.row(&format!("t = {} s", fixed(*time)), sci(*r));
    }
    t.heading(&format!("diagonal rates ({} basis)", report.generator.basis));
    for d in &report.diagonal_rates {
        let time = d.time.map_or("-".into(), |x| format!("{} s", fixed(x)));
        t.row(&d.element, format!("{:>10} 1/s   {time}", fixed(d.rate)));
    }
    generator_table(&mut t, &report.generator);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let doc = crate::io::envelope(&m.finish(config), "report", to_value(&report));
    emit(out, &doc, &t.finish())
}

#[derive(Debug, Serialize, Deserialize)]
struct RebuildCheck {
    /// `‖−D(L) − model‖ / ‖model‖` for the model Lindblad set.
    relative_to_model: f64,
    /// Same against the full input relaxation.
    relative_to_input: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct DecompositionReport {
    #[serde(flatten)]
    decomposition: RelaxationDecomposition,
    longitudinal_times: [f64; 2],
    rebuild: Option<RebuildCheck>,
}

fn relative(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let d = b.norm();
    if d > 0.0 {
        (a - b).norm() / d
    } else {
        a.norm()
    }
}

fn decompose_cmd(a: DecomposeArgs, file: &FileConfig, out: Option<&Path>) -> CliResult<()> {
    let mut m = ManifestBuilder::start("decompose");
    let g: Supergenerator = read_input(&a.generator, &mut m)?.payload(GENERATOR_KEYS)?;
    if let Some(b) = a.basis {
        let want = BasisKind::from(b);
        if g.basis != want {
            return Err(Error::WrongBasis { expected: want.to_string(), got: g.basis.to_string() }.into());
        }
    }
    let opts = DecompositionOptions {
        centrosymmetric: !a.no_symmetrize,
        merge: MergeOptions {
            merge_degenerate: !a.no_merge,
            degeneracy_tolerance: pick(a.degeneracy_tol, file.degeneracy_tol, MergeOptions::default().degeneracy_tolerance),
        },
        ..DecompositionOptions::default()
    };
    let d = decompose(&g, &opts)?;
    let rebuild = if a.rebuild_check {
        let rebuilt = -dissipator_from_lindblads(&d.model_lindblads())?;
        let model = model_superoperator(&d.r_t1_zee, &d.r_t2_zee)?;
        let input = g.to_basis(BasisKind::Zeeman)?.relaxation_part;
        Some(RebuildCheck { relative_to_model: relative(&rebuilt, &model), relative_to_input: relative(&rebuilt, &input) })
    } else {
        None
    };
    let report = DecompositionReport { longitudinal_times: d.longitudinal_times(), decomposition: d, rebuild };
    let config = to_value(&opts);

    let d = &report.decomposition;
    let mut t = Table::new();
    t.heading("T1 block, transition basis (1/s)").real_matrix(&d.r_t1_tra);
    t.heading("T1 block, Zeeman basis (1/s)").real_matrix(&d.r_t1_zee);
    t.heading("T2 rates, Zeeman basis (1/s)").real_matrix(&d.r_t2_zee.rates);
    t.heading("adiabatic T2 rates (1/s)").real_matrix(&d.r_t2_ad.rates);
    t.heading("summary")
        .row("nonadiabatic rate", format!("{} 1/s", fixed(d.nonadiabatic_rate)))
        .row("T1 diagonal spread", fixed(d.diagonal_spread))
        .row(
            "adiabatic eigenvalues",
            d.adiabatic_eigenvalues.iter().map(|&x| fixed(x)).collect::<Vec<_>>().join(", "),
        )
        .row(
            "longitudinal times",
            format!("{} s, {} s", fixed(report.longitudinal_times[0]), fixed(report.longitudinal_times[1])),
        )
        .row("discrepancy", sci(d.discrepancy));
    if let Some(r) = &report.rebuild {
        t.row("rebuild vs model", sci(r.relative_to_model)).row("rebuild vs input", sci(r.relative_to_input));
    }
    t.heading(&format!("Lindblad operators ({})", d.lindblads.len()));
    if d.lindblads.is_empty() {
        t.line("none");
    }
    for term in &d.lindblads.terms {
        let label = term.label.as_deref().unwrap_or("-");
        t.line(&format!("{label:<26} {:<28} weight {}", format!("{:?}", term.provenance), fixed(term.weight)));
    }
    let doc = crate::io::envelope(&m.finish(config), "decomposition", to_value(&report));
    emit(out, &doc, &t.finish())
}

#[derive(Serialize, Deserialize)]
struct MatrixDoc(#[serde(with = "matrix::json")] ComplexMatrix);

fn read_filter_input(doc: &InputDoc) -> CliResult<Result<TomographyDataset, ComplexMatrix>> {
    if doc.has("dataset") || doc.has("times") {
        Ok(Ok(doc.payload(&[&["dataset"]])?))
    } else {
        let MatrixDoc(p) = doc.payload(&[&["propagator"]])?;
        Ok(Err(p))
    }
}

fn filter_cp(a: FilterArgs, out: Option<&Path>) -> CliResult<()> {
    let mut m = ManifestBuilder::start("filter-cp");
    let doc = read_input(&a.input, &mut m)?;
    let (key, payload, masses) = match read_filter_input(&doc)? {
        Ok(ds) => {
            let mut filtered = Vec::new();
            let mut masses = Vec::new();
            for p in ds.propagators()? {
                let (f, mass) = cp_filter_with_mass(&p)?;
                filtered.push(f);
                masses.push(mass);
            }
            let out = TomographyDataset::from_propagators(ds.hamiltonian.clone(), ds.times.clone(), filtered)?;
            ("dataset", to_value(&out), masses)
        }
        Err(p) => {
            let (f, mass) = cp_filter_with_mass(&p)?;
            ("propagator", to_value(&MatrixDoc(f)), vec![mass])
        }
    };
    let mut t = Table::new();
    t.heading("complete-positivity filter");
    for (k, mass) in masses.iter().enumerate() {
        t.row(&format!("propagator {k}"), format!("removed negative eigenvalue mass {}", sci(*mass)));
    }
    let mut doc = crate::io::envelope(&m.finish(json!({})), key, payload);
    doc["removed_mass"] = json!(masses);
    emit(out, &doc, &t.finish())
}

fn convert(a: ConvertArgs, file: &FileConfig, out: Option<&Path>) -> CliResult<()> {
    let mut m = ManifestBuilder::start("convert");
    let g: Supergenerator = read_input(&a.generator, &mut m)?.payload(GENERATOR_KEYS)?;
    let basis = a
        .basis
        .or(file.basis)
        .ok_or_else(|| CliError::Usage("convert needs a target --basis".into()))?;
    let g = g.to_basis(basis.into())?;
    let mut t = Table::new();
    generator_table(&mut t, &g);
    let doc = crate::io::envelope(&m.finish(json!({ "basis": value_name(basis) })), "generator", to_value(&g));
    emit(out, &doc, &t.finish())
}
