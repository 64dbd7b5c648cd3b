use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use deltarray_core::filter::design_pair_cell;
use deltarray_core::reduction::{reduce, DEFAULT_PHASE_TOL};
use deltarray_core::resonance::{
    find_perfect_tunnelling, qbs_residual_n2, qbs_residual_n2_printed, qbs_residual_n3, qbs_residual_n4,
    scan_energy, SearchOptions, AGREE_TOL, PERFECT_TOL,
};
use deltarray_core::transfer::compose;
use deltarray_core::units::{k_from_energy, reduced_strength};
use deltarray_core::{reflection, transmission, BarrierArray};
use serde_json::json;

use crate::config::{Experiment, SCHEMA_VERSION};
use crate::CliError;

pub const CSV_HEADER: &str = "energy_meV,k_per_nm,T,R";
pub const RESONANCE_HEADER: &str =
    "energy_meV,k_per_nm,T,m21_sq,bracket_width,method,branch,form,form_residual,form_agrees";

const DEFAULT_RESONANCE_GRID: usize = 4000;

/// Shortest round-trip decimal.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

fn domain(e: deltarray_core::Error) -> CliError {
    CliError::Domain(e.to_string())
}

/// Writes to `out` or returns the text for stdout.
fn emit(text: String, out: Option<&Path>) -> Result<Option<String>, CliError> {
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display())))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

pub fn transmit(exp: &Experiment, energy: f64) -> Result<String, CliError> {
    let k = k_from_energy(energy, &exp.material).map_err(domain)?;
    let tm = compose(&exp.array, k).map_err(domain)?;
    Ok(format!("{},{},{},{}\n", num(energy), num(k), num(transmission(&tm)), num(reflection(&tm))))
}

pub fn scan(exp: &Experiment, out: Option<&Path>) -> Result<Option<String>, CliError> {
    let s = exp.scan()?;
    let spec = scan_energy(&exp.array, &exp.material, s.emin_meV, s.emax_meV, s.points).map_err(domain)?;
    let mut csv = String::with_capacity(64 * spec.points.len());
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for p in &spec.points {
        let e = p.energy_mev.expect("material bound");
        let _ = writeln!(csv, "{},{},{},{}", num(e), num(p.k), num(p.transmission), num(p.reflection));
    }
    if let Some(path) = out {
        let script = plot_script(path);
        emit(csv, Some(path))?;
        emit(script, Some(&path.with_extension("gp")))?;
        Ok(None)
    } else {
        Ok(Some(csv))
    }
}

fn plot_script(csv: &Path) -> String {
    let name = csv.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str("set xlabel 'Energy (meV)'\n");
    s.push_str("set ylabel 'Transmission'\n");
    s.push_str("set yrange [0:1.05]\n");
    let _ = writeln!(s, "plot '{name}' using 1:3 with lines notitle");
    s
}

/// Closed forms that apply to an array shape, evaluated at wave number `k`.
fn closed_forms(array: &BarrierArray, k: f64) -> Vec<(&'static str, Option<f64>)> {
    let b = array.barriers();
    let equal_g = b.windows(2).all(|w| w[0].g == w[1].g);
    let spacing = b.get(1).map(|x| x.x - b[0].x).unwrap_or(0.0);
    let equal_spacing = b.windows(2).all(|w| ((w[1].x - w[0].x) - spacing).abs() <= 1e-9 * spacing);
    if !equal_g || !equal_spacing {
        return vec![("none", None)];
    }
    let lambda = b[0].g / k;
    let s = k * spacing;
    match b.len() {
        2 => vec![
            ("pair_derived", Some(qbs_residual_n2(lambda, 2.0 * s))),
            ("pair_printed", qbs_residual_n2_printed(lambda, 2.0 * s).ok()),
        ],
        3 => vec![("triple_printed", qbs_residual_n3(lambda, s).ok())],
        4 => vec![("quadruple_printed", qbs_residual_n4(lambda, s).ok())],
        _ => vec![("none", None)],
    }
}

fn pair_branch(array: &BarrierArray, k: f64) -> Option<i64> {
    let b = array.barriers();
    if b.len() != 2 || b[0].g != b[1].g {
        return None;
    }
    let d = b[1].x - b[0].x;
    let lambda = b[0].g / k;
    Some(((2.0 * k * d - PI - 2.0 * (lambda / 2.0).atan()) / (2.0 * PI)).round() as i64)
}

pub fn resonances(exp: &Experiment, out: Option<&Path>) -> Result<Option<String>, CliError> {
    let s = exp.scan()?;
    let opts = SearchOptions {
        grid: exp.config.resonances.grid.unwrap_or(DEFAULT_RESONANCE_GRID),
        tol: exp.config.resonances.tol.unwrap_or(PERFECT_TOL),
    };
    if opts.grid < 16 {
        return Err(CliError::Config(format!("resonance grid must be at least 16, got {}", opts.grid)));
    }
    let lo = k_from_energy(s.emin_meV, &exp.material).map_err(domain)?;
    let hi = k_from_energy(s.emax_meV, &exp.material).map_err(domain)?;
    let report = find_perfect_tunnelling(&exp.array, lo, hi, opts)
        .map_err(domain)?
        .with_material(&exp.material);

    let mut csv = String::from(RESONANCE_HEADER);
    csv.push('\n');
    for r in &report.resonances {
        let branch = pair_branch(&exp.array, r.k).map(|b| b.to_string()).unwrap_or_default();
        for (form, residual) in closed_forms(&exp.array, r.k) {
            let (res, agrees) = match (form, residual) {
                ("none", _) => (String::new(), String::new()),
                (_, Some(v)) => (num(v), (v.abs() <= AGREE_TOL).to_string()),
                (_, None) => ("pole".to_string(), "false".to_string()),
            };
            let _ = writeln!(
                csv,
                "{},{},{},{},{},oracle,{branch},{form},{res},{agrees}",
                num(r.energy_mev.expect("material bound")),
                num(r.k),
                num(r.transmission),
                num(r.m21_sq),
                num(r.bracket_width),
            );
        }
    }
    emit(csv, out)
}

pub fn reduce_cmd(exp: &Experiment, energy: f64, out: Option<&Path>) -> Result<String, CliError> {
    let k = k_from_energy(energy, &exp.material).map_err(domain)?;
    let tol = exp.config.reduce.tol.unwrap_or(DEFAULT_PHASE_TOL);
    let r = reduce(&exp.array, k, tol).map_err(domain)?;

    let mut human = String::new();
    let class = format!("{:?}", r.classification);
    if r.is_zero_strength_single() {
        let _ = writeln!(human, "classification: {class}, zero strength, T=1");
    } else {
        let _ = writeln!(human, "classification: {class}");
    }
    let _ = writeln!(human, "energy_meV: {}  k_per_nm: {}  T: {}", num(energy), num(k), num(r.transmission));
    let _ = writeln!(human, "effective barriers: {} (from {})", r.effective.len(), exp.array.len());
    for b in r.effective.barriers() {
        let _ = writeln!(human, "  x_nm={} J_eVA={}", num(b.x), num(exp.strength_ev_angstrom(b.g)));
    }
    if let Some(p) = r.four_barrier_pattern {
        let _ = writeln!(human, "four-barrier pattern: {p:?}");
    }

    let doc = json!({
        "schema": SCHEMA_VERSION,
        "energy_meV": energy,
        "k_per_nm": k,
        "tolerance": tol,
        "zero_strength": r.is_zero_strength_single(),
        "effective_barriers": r.effective.barriers().iter()
            .map(|b| json!({"x_nm": b.x, "J_eVA": exp.strength_ev_angstrom(b.g)}))
            .collect::<Vec<_>>(),
        "report": r,
    });
    let text = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
    match emit(text, out)? {
        Some(j) => Ok(format!("{human}\n{j}")),
        None => Ok(human),
    }
}

pub fn design(exp: &Experiment, target: f64, branch: u32, out: Option<&Path>) -> Result<Option<String>, CliError> {
    let j = exp.config.design.j_eva.unwrap_or(exp.physical[0].1);
    if target <= 0.0 || !target.is_finite() {
        return Err(CliError::Domain(format!("nonpositive energy: {target} meV")));
    }
    let d = design_pair_cell(target, &exp.material, j, branch).map_err(domain)?;
    let k = k_from_energy(target, &exp.material).map_err(domain)?;
    let g = reduced_strength(j, &exp.material);
    let pair = BarrierArray::from_pairs([(0.0, g), (d, g)]).map_err(domain)?;
    let t = transmission(&compose(&pair, k).map_err(domain)?);
    let material = json!({
        "label": exp.material.label(),
        "effective_mass_ratio": exp.material.effective_mass_ratio(),
    });
    let doc = json!({
        "schema": SCHEMA_VERSION,
        "material": material,
        "barriers": [{"x_nm": 0.0, "J_eVA": j}, {"x_nm": d, "J_eVA": j}],
        "design": {
            "target_meV": target,
            "branch": branch,
            "J_eVA": j,
            "d_nm": d,
            "k_per_nm": k,
            "lambda": g / k,
            "transmission_at_target": t,
        },
    });
    emit(serde_json::to_string_pretty(&doc).expect("serializable") + "\n", out)
}

pub fn out_path(p: &Option<PathBuf>) -> Option<&Path> {
    p.as_deref()
}
