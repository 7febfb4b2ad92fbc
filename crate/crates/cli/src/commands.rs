use std::fmt::Write as _;
use std::fs;

use serde_json::{json, Value};

use cornerlab::bohr::BohrPartition;
use cornerlab::corners::{corner_count_by_difference, integer_corner_scan};
use cornerlab::harmonic::DensityFunction;
use cornerlab::regularity::{bohr_regularize, double_regularity, DOUBLE_CAP};
use cornerlab::variational::{
    minimize_T, pipeline_lower_bound, sweep_and_envelope, EnvelopePoints, MinimizeOptions, PipelineParams,
};

use crate::config::RunConfig;
use crate::CliError;

pub fn scan(cfg: &mut RunConfig) -> Result<String, CliError> {
    let a = cfg.plane_set()?;
    let grp = a.group().clone();
    let profile = corner_count_by_difference(&a)?;
    let mut body = String::from("d_index,d_repr,count\n");
    for (d, c) in profile.counts().iter().enumerate() {
        writeln!(body, "{d},{},{c}", grp.element_at(d)).unwrap();
    }
    let alpha = a.density();
    let g2 = (grp.order() as f64).powi(2);
    let (d_star, repr, count) = match profile.popular() {
        Ok((d, c)) => (d.to_string(), grp.element_at(d).to_string(), c),
        Err(_) => ("none".to_string(), "none".to_string(), 0),
    };
    writeln!(
        body,
        "# summary alpha={alpha} d_star={d_star} d_star_repr={repr} count={count} alpha3_g2={}",
        alpha.powi(3) * g2
    )
    .unwrap();
    Ok(cfg.csv_header() + &body)
}

pub fn popular(cfg: &mut RunConfig) -> Result<String, CliError> {
    let a = cfg.plane_set()?;
    let grp = a.group().clone();
    let (d, count) = corner_count_by_difference(&a)?.popular()?;
    let alpha = a.density();
    let expected = alpha.powi(3) * (grp.order() as f64).powi(2);
    let ratio = if expected > 0.0 { count as f64 / expected } else { f64::NAN };
    let body = format!(
        "alpha,d_star,d_repr,count,alpha3_g2,ratio\n{alpha},{d},{},{count},{expected},{ratio}\n",
        grp.element_at(d)
    );
    Ok(cfg.csv_header() + &body)
}

pub fn zscan(cfg: &mut RunConfig) -> Result<String, CliError> {
    let a = cfg.plane_set()?;
    let rho = cfg.rational_or("rho", "1/4")?;
    let scan = integer_corner_scan(&a, &[], rho)?;
    let mut body = String::from("d,count\n");
    for (d, c) in &scan.counts {
        writeln!(body, "{d},{c}").unwrap();
    }
    match scan.best {
        Some((d, c)) => writeln!(body, "# summary n={} best_d={d} count={c}", scan.n).unwrap(),
        None => writeln!(body, "# summary n={} best_d=none count=0", scan.n).unwrap(),
    }
    Ok(cfg.csv_header() + &body)
}

fn solver_options(cfg: &mut RunConfig) -> Result<(usize, MinimizeOptions), CliError> {
    let n: usize = cfg.get_or("grid-n", "6")?;
    let restarts: usize = cfg.get_or("restarts", "8")?;
    let seed: u64 = cfg.get_or("seed", "0")?;
    Ok((n, MinimizeOptions { restarts, seed, ..Default::default() }))
}

fn alpha_grid(cfg: &mut RunConfig) -> Result<Vec<f64>, CliError> {
    if let Some(raw) = cfg.raw("alpha") {
        let alphas = raw
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::validation(format!("bad alpha {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if alphas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::validation("alpha values must be strictly increasing"));
        }
        return Ok(alphas);
    }
    let samples: usize = cfg.get_or("samples", "21")?;
    if samples < 2 {
        return Err(CliError::validation("--samples must be at least 2"));
    }
    Ok((0..samples).map(|i| i as f64 / (samples - 1) as f64).collect())
}

/// `(alpha, m_hat)` per sample and the envelope at each, or the lone value
/// for a single sample.
fn run_sweep(cfg: &mut RunConfig) -> Result<(Vec<(f64, f64)>, Vec<f64>, usize, MinimizeOptions), CliError> {
    let alphas = alpha_grid(cfg)?;
    let (n, opts) = solver_options(cfg)?;
    if alphas.len() == 1 {
        let m = minimize_T(alphas[0], n, &opts)?;
        return Ok((vec![(m.alpha, m.t)], vec![m.t], n, opts));
    }
    let sweep = sweep_and_envelope(&alphas, n, &opts)?;
    let pts: Vec<(f64, f64)> = sweep.minima.iter().map(|m| (m.alpha, m.t)).collect();
    Ok((pts, sweep.envelope.values(), n, opts))
}

pub fn variational(cfg: &mut RunConfig) -> Result<String, CliError> {
    let (pts, env, n, opts) = run_sweep(cfg)?;
    let mut body = String::from("alpha,m_hat,envelope,alpha3,alpha4,n,restarts,seed\n");
    for ((a, m), e) in pts.iter().zip(&env) {
        writeln!(body, "{a},{m},{e},{},{},{n},{},{}", a.powi(3), a.powi(4), opts.restarts, opts.seed).unwrap();
    }
    Ok(cfg.csv_header() + &body)
}

fn read_samples(path: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::validation(format!("cannot read {path}: {e}")))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').map(str::trim).collect();
    let col = |name: &str| {
        header.iter().position(|h| *h == name).ok_or_else(|| CliError::validation(format!("{path}: no {name} column")))
    };
    let (ia, im) = (col("alpha")?, col("m_hat")?);
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            let get = |i: usize| {
                f.get(i)
                    .and_then(|s| s.trim().parse::<f64>().ok())
                    .ok_or_else(|| CliError::validation(format!("{path}: bad row {l:?}")))
            };
            Ok((get(ia)?, get(im)?))
        })
        .collect()
}

pub fn envelope(cfg: &mut RunConfig) -> Result<String, CliError> {
    let samples = match cfg.raw("input") {
        Some(path) => read_samples(&path)?,
        None => run_sweep(cfg)?.0,
    };
    let env = EnvelopePoints::new(samples)?;
    let mut body = String::from("alpha,m_hat,envelope,hull\n");
    for ((a, m), e) in env.samples().iter().zip(env.values()) {
        let on_hull = env.hull().iter().any(|h| h.0 == *a) as u8;
        writeln!(body, "{a},{m},{e},{on_hull}").unwrap();
    }
    Ok(cfg.csv_header() + &body)
}

fn json_output(cfg: &RunConfig, result: Value) -> Result<String, CliError> {
    let out = json!({ "command": cfg.command, "config": cfg.recorded(), "result": result });
    Ok(serde_json::to_string_pretty(&out).expect("JSON values serialize") + "\n")
}

pub fn regularize(cfg: &mut RunConfig) -> Result<String, CliError> {
    let a = cfg.plane_set()?;
    let grp = a.group().clone();
    let growth = cfg.growth()?;
    let eps = cfg.eps()?;
    let delta = cfg.rational("delta")?;
    let n = grp.size();
    let dense = a.to_dense();
    let rows: Vec<f64> = (0..n).map(|x| dense[x * n..(x + 1) * n].iter().sum::<f64>() / n as f64).collect();
    let cols: Vec<f64> = (0..n).map(|y| (0..n).map(|x| dense[x * n + y]).sum::<f64>() / n as f64).collect();
    let funcs = [DensityFunction::new(grp.clone(), rows)?, DensityFunction::new(grp.clone(), cols)?];
    let bohr = bohr_regularize(&funcs, growth)?;
    let freqs: Vec<Vec<u64>> = bohr.partition.freqs().iter().map(|c| c.coeffs().to_vec()).collect();
    let mut result = json!({
        "group": grp.to_string(),
        "alpha": a.density(),
        "bohr": {
            "functions": ["row_density", "column_density"],
            "rounds": bohr.rounds,
            "frequencies": freqs,
            "parts_per_axis": bohr.partition.parts_per_axis(),
            "parts": bohr.parts.num_parts(),
            "smoothing_radius": bohr.smoothing_set.radius().to_string(),
            "l1_norms": bohr.l1_norms,
            "spectral_norms": bohr.spectral_norms,
            "l2_target": bohr.l2_target,
            "spectral_target": bohr.spectral_target,
            "spectral_within_target": bohr.spectral_within_target(),
            "degenerate": bohr.degenerate,
            "history": bohr.history,
        },
    });
    if let Some(delta) = delta {
        let p = BohrPartition::with_width(grp.clone(), bohr.partition.freqs().to_vec(), delta)?.partition()?;
        result["partition_at_delta"] =
            json!({ "delta": delta.to_string(), "parts": p.num_parts(), "sizes": p.sizes() });
    }
    if grp.order() <= DOUBLE_CAP {
        let d = double_regularity(&grp, &[dense], eps, growth, 1)?;
        result["double"] = json!({
            "rounds": d.rounds,
            "bohr_parts": d.bohr.parts.num_parts(),
            "graph_parts": d.graph.num_parts(),
            "common_parts": d.common.num_parts(),
            "refined_parts": d.refined.num_parts(),
            "f1_norms": d.f1_norms,
            "f2_cut_norms": d.f2_cut_norms,
            "cut_exact": d.cut_exact,
            "f1_target": d.f1_target,
            "f2_target": d.f2_target,
            "part_l2_target": d.part_l2_target,
            "degenerate": d.degenerate,
            "history": d.history,
        });
    }
    json_output(cfg, result)
}

pub fn pipeline(cfg: &mut RunConfig) -> Result<String, CliError> {
    let a = cfg.plane_set()?;
    let params = PipelineParams { eps: cfg.eps()?, growth: cfg.growth()?, nu_radius: cfg.rational("rho")? };
    let report = pipeline_lower_bound(&a, &params)?;
    json_output(cfg, serde_json::to_value(&report).expect("report serializes"))
}

pub fn write_output(cfg: &mut RunConfig, text: &str) -> Result<(), CliError> {
    match cfg.raw("out") {
        Some(path) => fs::write(&path, text).map_err(|e| CliError::validation(format!("cannot write {path}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
