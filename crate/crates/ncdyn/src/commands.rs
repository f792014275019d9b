use std::fs;
use std::path::Path;

use ncdyn_core::cpdyn::{
    evolve, evolve_state, generator_with_spectrum, stationary_state, CpMap, DiscreteSemigroup, GklsGenerator, GklsSemigroup,
};
use ncdyn_core::dilation::{kraus_word_expectation, stinespring};
use ncdyn_core::eigenlists::{interaction_report, EigenvalueList};
use ncdyn_core::freeprod::{expect_e0, section_mul, section_star};
use ncdyn_core::moments::{default_names, moment, render, Semigroup};
use ncdyn_core::offwhite::{default_delta, gram_matrix, quasiorthogonality_diagnostic, CorrelationSpec, Grid};
use ncdyn_core::opalg::eig_descending;
use ncdyn_core::prodsys::{gauge_inverse, gauge_mul, index_dimension, kernel_direct_sum, CovKernel, ExpUnit};
use ncdyn_core::ComplexMatrix;
use serde::Serialize;

use crate::codec::{self, GaugeJson, GeneratorJson, MapJson, MatrixJson, SectionJson, UnitJson};
use crate::error::{CliError, Result};
use crate::json::{self, Report};
use crate::sweep;
use crate::{Command, CpCommand, DilateCommand, FreeprodCommand, GaugeCommand, OffwhiteCommand};

pub(crate) fn execute(command: Command, seed: u64) -> Result<String> {
    match command {
        Command::Eig { matrix } => eig(&matrix),
        Command::InteractionBound { minus, plus } => interaction(minus, plus),
        Command::Cp(CpCommand::Stationary { spectrum }) => cp_stationary(spectrum),
        Command::Cp(CpCommand::Evolve { gen, t, state }) => cp_evolve(&gen, t, state.as_deref()),
        Command::Moments { gen, map, times, mats } => moments(gen.as_deref(), map.as_deref(), &times, &mats),
        Command::Dilate(args) => match args.action {
            Some(DilateCommand::Expect { map, times, mats }) => dilate_expect(&map, &times, &mats),
            None => dilate(args.map.as_deref().expect("clap requires --map without a subcommand")),
        },
        Command::Freeprod(FreeprodCommand::Mul { lhs, rhs }) => freeprod_mul(&lhs, &rhs),
        Command::Freeprod(FreeprodCommand::Star { section }) => freeprod_star(&section),
        Command::Freeprod(FreeprodCommand::Expect { section, gen, map }) => freeprod_expect(&section, gen.as_deref(), map.as_deref()),
        Command::Index { units, with } => index(&units, with.as_deref()),
        Command::Gauge(GaugeCommand::Mul { lhs, rhs }) => gauge_product(&lhs, &rhs),
        Command::Gauge(GaugeCommand::Inverse { element }) => gauge_inv(&element),
        Command::Offwhite(OffwhiteCommand::Gram { theta, delta, interval, n, out }) => gram(theta, delta, &interval, n, out.as_deref()),
        Command::Offwhite(OffwhiteCommand::Quasi { theta, delta, intervals, refine }) => quasi(theta, delta, &intervals, &refine),
        Command::Sweep { spec, out } => {
            let spec: sweep::SweepSpec = codec::read_json(&spec, "spec")?;
            let csv = sweep::run(&spec, seed)?;
            match out {
                Some(path) => {
                    fs::write(path, csv)?;
                    Ok(String::new())
                }
                None => Ok(csv),
            }
        }
    }
}

fn emit<T: Serialize>(body: T) -> Result<String> {
    let mut s = json::to_string(&Report::new(body)).map_err(|e| CliError::Invalid(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let m: MatrixJson = codec::read_json(path, "matrix")?;
    Ok((&m).try_into()?)
}

fn read_mats(path: &Path) -> Result<Vec<ComplexMatrix>> {
    let ms: Vec<MatrixJson> = codec::read_json(path, "mats")?;
    Ok(codec::matrices(&ms)?)
}

fn read_generator(path: &Path) -> Result<GklsGenerator> {
    let g: GeneratorJson = codec::read_json(path, "generator")?;
    Ok((&g).try_into()?)
}

fn read_map(path: &Path) -> Result<CpMap> {
    let m: MapJson = codec::read_json(path, "map")?;
    Ok((&m).try_into()?)
}

fn read_units(path: &Path) -> Result<Vec<ExpUnit>> {
    let us: Vec<UnitJson> = codec::read_json(path, "units")?;
    us.iter().map(UnitJson::to_unit).collect()
}

fn read_section(path: &Path) -> Result<ncdyn_core::freeprod::Section> {
    let s: SectionJson = codec::read_json(path, "section")?;
    codec::section_from_json(&s)
}

/// Semigroup from exactly one of a generator or a map file.
fn read_semigroup(gen: Option<&Path>, map: Option<&Path>) -> Result<Box<dyn Semigroup>> {
    match (gen, map) {
        (Some(g), None) => Ok(Box::new(GklsSemigroup::new(&read_generator(g)?))),
        (None, Some(m)) => Ok(Box::new(DiscreteSemigroup::new(read_map(m)?))),
        _ => Err(CliError::Usage("exactly one of --gen and --map is required".into())),
    }
}

fn eig(path: &Path) -> Result<String> {
    #[derive(Serialize)]
    struct Body {
        values: Vec<f64>,
        vectors: MatrixJson,
    }
    let s = eig_descending(&read_matrix(path)?)?;
    emit(Body { vectors: (&s.vectors).into(), values: s.values })
}

fn interaction(minus: Vec<f64>, plus: Vec<f64>) -> Result<String> {
    #[derive(Serialize)]
    struct Body<'a> {
        bound: f64,
        tensor_minus: &'a [f64],
        tensor_plus: &'a [f64],
    }
    let r = interaction_report(&EigenvalueList::new(minus)?, &EigenvalueList::new(plus)?)?;
    emit(Body { bound: r.bound, tensor_minus: r.tensor_minus.values(), tensor_plus: r.tensor_plus.values() })
}

fn cp_stationary(spectrum: Vec<f64>) -> Result<String> {
    #[derive(Serialize)]
    struct Body<'a> {
        generator: GeneratorJson,
        state: MatrixJson,
        spectrum: &'a [f64],
    }
    let n = spectrum.len();
    let lam = EigenvalueList::new(spectrum)?;
    let gen = generator_with_spectrum(&lam, n)?;
    let omega = stationary_state(&gen)?;
    let got = omega.eigenvalue_list()?;
    emit(Body { generator: (&gen).into(), state: omega.matrix().into(), spectrum: got.values() })
}

fn cp_evolve(gen: &Path, t: f64, state: Option<&Path>) -> Result<String> {
    #[derive(Serialize)]
    struct Body {
        t: f64,
        action: MatrixJson,
        map: MapJson,
        #[serde(skip_serializing_if = "Option::is_none")]
        state: Option<MatrixJson>,
    }
    let gen = read_generator(gen)?;
    let p = evolve(&gen, t)?;
    let triple = ncdyn_core::dilation::stinespring_of_map(&p, false)?;
    let state = match state {
        Some(path) => Some((&evolve_state(&gen, &read_matrix(path)?, t)?).into()),
        None => None,
    };
    emit(Body { t, action: p.action().into(), map: MapJson { kraus: codec::matrices_json(&triple.kraus) }, state })
}

fn moments(gen: Option<&Path>, map: Option<&Path>, times: &[f64], mats: &Path) -> Result<String> {
    #[derive(Serialize)]
    struct Body<'a> {
        times: &'a [f64],
        rendered: String,
        matrix: MatrixJson,
    }
    let sg = read_semigroup(gen, map)?;
    let mats = read_mats(mats)?;
    let names = default_names(times.len());
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let rendered = render(times, &names)?;
    let m = moment(&*sg, times, &mats)?;
    emit(Body { times, rendered, matrix: (&m).into() })
}

fn dilate(path: &Path) -> Result<String> {
    #[derive(Serialize)]
    struct Body {
        r: usize,
        v: MatrixJson,
        map: MapJson,
        unital_defect: f64,
        residual: f64,
    }
    let phi = read_map(path)?;
    let s = stinespring(&phi, false)?;
    emit(Body {
        r: s.rep_rank,
        v: (&s.v).into(),
        map: MapJson { kraus: codec::matrices_json(&s.kraus) },
        unital_defect: phi.unital_defect(),
        residual: s.residual(&phi.to_linear_map()),
    })
}

fn dilate_expect(map: &Path, times: &[u32], mats: &Path) -> Result<String> {
    #[derive(Serialize)]
    struct Body<'a> {
        times: &'a [u32],
        matrix: MatrixJson,
    }
    let phi = read_map(map)?;
    let m = kraus_word_expectation(&phi, times, &read_mats(mats)?)?;
    emit(Body { times, matrix: (&m).into() })
}

fn freeprod_mul(lhs: &Path, rhs: &Path) -> Result<String> {
    #[derive(Serialize)]
    struct Body {
        section: SectionJson,
    }
    let f = section_mul(&read_section(lhs)?, &read_section(rhs)?)?;
    emit(Body { section: codec::section_json(&f) })
}

fn freeprod_star(path: &Path) -> Result<String> {
    #[derive(Serialize)]
    struct Body {
        section: SectionJson,
    }
    let f = section_star(&read_section(path)?);
    emit(Body { section: codec::section_json(&f) })
}

fn freeprod_expect(section: &Path, gen: Option<&Path>, map: Option<&Path>) -> Result<String> {
    #[derive(Serialize)]
    struct Body {
        l1_bound: f64,
        matrix: MatrixJson,
    }
    let sg = read_semigroup(gen, map)?;
    let f = read_section(section)?;
    let m = expect_e0(&f, &*sg)?;
    emit(Body { l1_bound: f.l1_bound(), matrix: (&m).into() })
}

fn index(units: &Path, with: Option<&Path>) -> Result<String> {
    #[derive(Serialize)]
    struct Body {
        index: usize,
        units: usize,
        exact: bool,
        kernel: MatrixJson,
        #[serde(skip_serializing_if = "Option::is_none")]
        with_index: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        product_index: Option<usize>,
    }
    let e = CovKernel::from_units(&read_units(units)?)?;
    let index = index_dimension(&e)?;
    let (with_index, product_index) = match with {
        Some(path) => {
            let f = CovKernel::from_units(&read_units(path)?)?;
            (Some(index_dimension(&f)?), Some(index_dimension(&kernel_direct_sum(&e, &f))?))
        }
        None => (None, None),
    };
    // Exponential units exhaust the units of their system, so the rank is exact.
    emit(Body { index, units: e.len(), exact: true, kernel: e.matrix().into(), with_index, product_index })
}

fn gauge_product(lhs: &Path, rhs: &Path) -> Result<String> {
    #[derive(Serialize)]
    struct Body {
        gauge: GaugeJson,
    }
    let g: GaugeJson = codec::read_json(lhs, "gauge")?;
    let h: GaugeJson = codec::read_json(rhs, "gauge")?;
    let p = gauge_mul(&g.to_element()?, &h.to_element()?)?;
    emit(Body { gauge: (&p).into() })
}

fn gauge_inv(path: &Path) -> Result<String> {
    #[derive(Serialize)]
    struct Body {
        gauge: GaugeJson,
    }
    let g: GaugeJson = codec::read_json(path, "gauge")?;
    emit(Body { gauge: (&gauge_inverse(&g.to_element()?)).into() })
}

fn correlation(theta: f64, delta: Option<f64>) -> Result<CorrelationSpec> {
    Ok(CorrelationSpec::new(theta, delta.unwrap_or_else(|| default_delta(theta)))?)
}

fn gram(theta: f64, delta: Option<f64>, interval: &[f64], n: usize, out: Option<&Path>) -> Result<String> {
    #[derive(Serialize)]
    struct Body<'a> {
        theta: f64,
        delta: f64,
        epsilon: f64,
        n: usize,
        toeplitz_defect: f64,
        min_eigenvalue: f64,
        max_eigenvalue: f64,
        out: &'a str,
    }
    let [left, right] = interval else {
        return Err(CliError::Usage("--interval takes two endpoints a,b".into()));
    };
    let spec = correlation(theta, delta)?;
    let g = gram_matrix(&spec, &Grid::new(*left, *right, n)?);
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for i in 0..n {
        w.write_record((0..n).map(|j| json::csv_float(g.entries[(i, j)])))?;
    }
    let csv = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    let Some(path) = out else {
        return Ok(String::from_utf8(csv).expect("csv output is ASCII"));
    };
    fs::write(path, csv)?;
    let eig = g.eigenvalues()?;
    emit(Body {
        theta,
        delta: spec.delta(),
        epsilon: spec.epsilon(),
        n,
        toeplitz_defect: g.toeplitz_defect(),
        min_eigenvalue: eig[0],
        max_eigenvalue: eig[eig.len() - 1],
        out: &path.to_string_lossy(),
    })
}

fn quasi(theta: f64, delta: Option<f64>, intervals: &[f64], refine: &[usize]) -> Result<String> {
    if intervals.len() % 2 != 0 {
        return Err(CliError::Usage("--intervals takes endpoint pairs a1,b1,a2,b2,...".into()));
    }
    let pairs: Vec<(f64, f64)> = intervals.chunks(2).map(|c| (c[0], c[1])).collect();
    let report = quasiorthogonality_diagnostic(&correlation(theta, delta)?, &pairs, refine)?;
    sweep::quasi_csv(&report)
}
