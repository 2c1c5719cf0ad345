use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use paraflux::audit::{run_lemmas, AuditManifest, LemmaConfig, SweepResult};
use paraflux::io::{load_field, save_field, write_decomposition};
use paraflux::paraproduct::{verify_supports, SUPPORT_TOL};
use paraflux::{
    decompose_product, min_gap, Domain, DyadicSystem, Family, Field, GeneratorSpec, Grid, SpaceSpec,
};
use serde::Serialize;

use crate::{
    AuditArgs, Cli, Command, DecomposeArgs, DomainArg, Failure, Format, GenArgs, LemmasArgs, NormArgs, Source,
    SpaceArg,
};

/// Relative tolerance for `Σ Π_{1,k} + Π_2 = product` in `decompose`.
const RECONSTRUCTION_TOL: f64 = 1e-10;

pub fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Norm(a) => norm(a),
        Command::Decompose(a) => decompose(a),
        Command::Lemmas(a) => lemmas(a),
        Command::Audit(a) => audit(a),
        Command::Gen(a) => gen(a),
    }
}

fn with_path(e: paraflux::Error, path: &Path) -> Failure {
    match e {
        paraflux::Error::Io(io) => Failure::Io(format!("{}: {io}", path.display())),
        paraflux::Error::Format(m) => Failure::Io(format!("{}: malformed field file: {m}", path.display())),
        other => other.into(),
    }
}

fn read_specs(path: &Path) -> Result<Vec<GeneratorSpec>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| with_path(e.into(), path))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(paraflux::Error::from)?;
    let specs = match value {
        serde_json::Value::Array(_) => serde_json::from_value(value),
        v => serde_json::from_value(v).map(|s| vec![s]),
    };
    specs.map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn parse_wave(text: &str) -> Result<Vec<i64>, Failure> {
    text.split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Config(format!("bad wavevector {text:?}")))
}

/// Loads or generates the source fields; all must share one grid.
fn fields(src: &Source) -> Result<Vec<Field>, Failure> {
    let kinds = [!src.inputs.is_empty(), src.generator.is_some(), !src.wave.is_empty()];
    match kinds.iter().filter(|&&k| k).count() {
        0 => return Err(Failure::Config("no input: give --in, --gen or --wave".into())),
        1 => {}
        _ => return Err(Failure::Config("--in, --gen and --wave are mutually exclusive".into())),
    }
    let out: Vec<Field> = if !src.inputs.is_empty() {
        let mut out = Vec::new();
        for path in &src.inputs {
            out.push(load_field(path).map_err(|e| with_path(e, path))?);
        }
        out
    } else if let Some(path) = &src.generator {
        let mut out = Vec::new();
        for spec in read_specs(path)? {
            out.push(spec.materialize()?.1);
        }
        out
    } else {
        let grid = Grid::periodic(src.dim, src.grid)?;
        let mut out = Vec::new();
        for w in &src.wave {
            let k = parse_wave(w)?;
            if k.len() != src.dim {
                return Err(Failure::Config(format!("wavevector {w:?} does not have {} components", src.dim)));
            }
            out.push(Field::plane_wave(&grid, &k, Complex64::new(1.0, 0.0))?);
        }
        out
    };
    if out.iter().any(|f| f.grid() != out[0].grid()) {
        return Err(paraflux::Error::GridMismatch.into());
    }
    Ok(out)
}

#[derive(Serialize)]
struct NormRow {
    space: &'static str,
    s: f64,
    p: paraflux::Exponent,
    q: paraflux::Exponent,
    norm: f64,
}

#[derive(Serialize)]
struct NormReport<'a> {
    run: &'a NormArgs,
    grid: &'a Grid,
    jmax: usize,
    norms: Vec<NormRow>,
}

fn norm(a: &NormArgs) -> Result<(), Failure> {
    let fs = fields(&a.source)?;
    let [f] = fs.as_slice() else {
        return Err(Failure::Config(format!("norm takes one field, got {}", fs.len())));
    };
    let sys = DyadicSystem::new(f.grid());
    let bands = sys.decompose(f)?;
    let spaces = if a.space.is_empty() {
        vec![SpaceArg::B, SpaceArg::F]
    } else {
        a.space.clone()
    };
    let mut rows = Vec::new();
    for &space in &spaces {
        let family = match space {
            SpaceArg::B => Family::Besov,
            SpaceArg::F => Family::TriebelLizorkin,
        };
        for &s in &a.s {
            for &p in &a.p {
                for &q in &a.q {
                    let spec = SpaceSpec::new(family, s, p, q)?;
                    rows.push(NormRow {
                        space: family.symbol(),
                        s,
                        p,
                        q,
                        norm: spec.norm_of_bands(&bands)?,
                    });
                }
            }
        }
    }
    let mut out = std::io::stdout().lock();
    let io = |e: std::io::Error| Failure::from(paraflux::Error::from(e));
    if a.json {
        let report = NormReport {
            run: a,
            grid: f.grid(),
            jmax: sys.jmax(),
            norms: rows,
        };
        let text = serde_json::to_string_pretty(&report).map_err(paraflux::Error::from)?;
        writeln!(out, "{text}").map_err(io)?;
    } else {
        let g = f.grid();
        writeln!(out, "grid {:?} (n = {}), jmax {}", g.sizes(), g.dim(), sys.jmax()).map_err(io)?;
        writeln!(out, "{:<5} {:>8} {:>8} {:>8}  norm", "space", "s", "p", "q").map_err(io)?;
        for r in &rows {
            let (p, q) = (r.p.to_string(), r.q.to_string());
            writeln!(out, "{:<5} {:>8} {:>8} {:>8}  {}", r.space, r.s, p, q, r.norm).map_err(io)?;
        }
    }
    Ok(())
}

fn decompose(a: &DecomposeArgs) -> Result<(), Failure> {
    let mut fs = fields(&a.source)?;
    if let Some(m) = a.m {
        if fs.len() == 1 {
            fs = vec![fs[0].clone(); m];
        } else if fs.len() != m {
            return Err(Failure::Config(format!("--m {m} but {} factors were given", fs.len())));
        }
    }
    let m = fs.len();
    let gap = match a.gap {
        Some(g) => g,
        None => min_gap(m)?,
    };
    let sys = DyadicSystem::new(fs[0].grid());
    let pd = decompose_product(&fs, &sys, gap)?;
    let report = verify_supports(&pd, &sys, SUPPORT_TOL);
    let manifest = write_decomposition(&a.out, &pd, &report, sys.jmax(), a.dump_bands)?;
    let run = serde_json::to_string_pretty(a).map_err(paraflux::Error::from)?;
    fs::write(a.out.join("run.json"), run + "\n").map_err(paraflux::Error::from)?;
    println!(
        "m = {m}, N = {gap}, jmax = {}: {} files in {}",
        sys.jmax(),
        manifest.files.len(),
        a.out.display()
    );
    println!("reconstruction error {}", manifest.reconstruction_error);
    println!(
        "Pi_1 safe support: {}; claimed annulus pass rate {}; Pi_2 safe pass rate {}; Pi_2 claimed pass rate {}",
        report.pi1_safe, report.pi1_claimed_pass_rate, report.pi2_safe_pass_rate, report.pi2_claimed_pass_rate
    );
    if !report.pi1_safe {
        return Err(Failure::Check("a Pi_1 band term left [2^(j-2), 2^(j+1)]".into()));
    }
    if manifest.reconstruction_error.is_nan() || manifest.reconstruction_error > RECONSTRUCTION_TOL {
        return Err(Failure::Check(format!(
            "reconstruction error {} exceeds {RECONSTRUCTION_TOL}",
            manifest.reconstruction_error
        )));
    }
    Ok(())
}

fn emit(result: &SweepResult, out: Option<&Path>, format: Format) -> Result<(), Failure> {
    let bytes = match format {
        Format::Csv => result.to_csv_string()?.into_bytes(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(result).map_err(paraflux::Error::from)?;
            s.push('\n');
            s.into_bytes()
        }
    };
    let written = match out {
        Some(path) => fs::write(path, &bytes),
        None => std::io::stdout().lock().write_all(&bytes),
    };
    written.map_err(|e| paraflux::Error::from(e).into())
}

fn verdict(result: &SweepResult) -> Result<(), Failure> {
    let failed: Vec<String> = result
        .failures()
        .map(|r| format!("{} [{}] ratio {:?}", r.name, r.params(), r.ratio))
        .collect();
    eprintln!("{} records, {} failed", result.records.len(), failed.len());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failed.join("; ")))
    }
}

fn lemmas(a: &LemmasArgs) -> Result<(), Failure> {
    let cfg = LemmaConfig {
        size: a.size,
        planar_size: a.planar_size,
        hardy_samples: a.hardy_samples,
        hardy_max_len: a.hardy_max_len,
        seed: a.seed,
        only: a.only.clone(),
    };
    let result = run_lemmas(&cfg)?;
    emit(&result, a.out.as_deref(), a.format)?;
    verdict(&result)
}

fn audit(a: &AuditArgs) -> Result<(), Failure> {
    let manifest = match &a.manifest {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| with_path(e.into(), path))?;
            serde_json::from_str::<AuditManifest>(&text)
                .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
        }
        None => AuditManifest::catalog(),
    };
    if let Some(r) = &a.resolutions {
        if r.is_empty() {
            return Err(Failure::Config("--resolutions is empty".into()));
        }
    }
    let result = manifest.run(a.resolutions.as_deref())?;
    emit(&result, a.out.as_deref(), a.format)?;
    verdict(&result)
}

fn gen(a: &GenArgs) -> Result<(), Failure> {
    let specs = read_specs(&a.spec)?;
    fs::create_dir_all(&a.out).map_err(paraflux::Error::from)?;
    let domain = match a.domain {
        DomainArg::Physical => Domain::Physical,
        DomainArg::Spectral => Domain::Spectral,
    };
    for (i, spec) in specs.iter().enumerate() {
        let (_, f) = spec.materialize()?;
        let path = a.out.join(format!("field_{i:03}.fld"));
        save_field(&path, &f, domain)?;
        println!("{}", path.display());
    }
    Ok(())
}
