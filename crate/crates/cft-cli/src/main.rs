//! `cft`: command-line front end for the cft-core engine.
//!
//! Every subcommand prints a single JSON object
//! `{ "command", "inputs", "result", "diagnostics" }` on standard output
//! and exits 0; usage errors exit 2 with a message on standard error;
//! computation errors exit 1 and replace "result" with an "error" field.
//! Output is deterministic: keys are sorted and floats carry 17
//! significant digits.

mod format;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Number, Value};
use std::str::FromStr;

use cft_core::correlators::{
    bc_two_point, exact_complex, psi_npoint, sigma_four_point, to_complex64, vertex_npoint,
};
use cft_core::exact_linalg::det_rational;
use cft_core::fock::{virasoro_defect, FockModel, Sector};
use cft_core::fusion::{minimal_fuse, su2_fusion_admissible, verlinde_dim, FusionGenerator};
use cft_core::gromov_witten::{km_counts, wdvv_residual, Cp2Point};
use cft_core::qseries::{eta_eval, partition_count, theta_eval};
use cft_core::torus::{
    modular_residuals, z_boson, z_boson_radius, z_dirac, z_majorana, z_minimal,
};
use cft_core::virasoro::{
    central_charge_from_m, gram_matrix, irreducible_character, kac_determinant_closed,
    kac_table_classes, minimal_central_charge, minimal_weight, null_vectors,
};
use cft_core::{BigRational, CftError, Complex64, TorusPoint};
use format::{fbig, fcomplex, fnum, frat, parse_complex, parse_rational};

fn parse_complex_arg(s: &str) -> Result<Complex64, String> {
    parse_complex(s)
}

fn parse_rational_arg(s: &str) -> Result<BigRational, String> {
    parse_rational(s)
}

/// One vertex insertion as "z,alpha", e.g. "1+2i,-1/2".
fn parse_insertion_arg(s: &str) -> Result<(Complex64, BigRational), String> {
    let (z, alpha) = s
        .rsplit_once(',')
        .ok_or_else(|| format!("expected z,alpha in {s:?}"))?;
    Ok((parse_complex(z)?, parse_rational(alpha)?))
}

#[derive(Parser)]
#[command(name = "cft", version, about = "Exact and numeric 2d CFT computations with JSON output")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dedekind eta function at a point of the upper half-plane.
    Eta {
        #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
        tau: Complex64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Jacobi theta function theta_index(w | tau), index in 1..4.
    Theta {
        #[arg(long)]
        index: u8,
        #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true, default_value = "0+0i")]
        w: Complex64,
        #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
        tau: Complex64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Number of integer partitions of n.
    PartitionCount {
        #[arg(long)]
        n: u32,
    },
    /// Torus partition functions.
    Z {
        #[command(subcommand)]
        model: ZModel,
    },
    /// Primary weights of the minimal model M(P, Q).
    KacTable {
        #[arg(long = "P")]
        p_mod: u32,
        #[arg(long = "Q")]
        q_mod: u32,
    },
    /// Exact Gram matrix of the level-N Verma module basis.
    Gram {
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        c: BigRational,
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        h: BigRational,
        #[arg(long)]
        level: u32,
    },
    /// Gram determinant against the Kac closed form, exactly.
    KacDet {
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        m: BigRational,
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        h: BigRational,
        #[arg(long)]
        level: u32,
    },
    /// Basis for the null vectors at one level of a Verma module.
    Nullvec {
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        c: BigRational,
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        h: BigRational,
        #[arg(long)]
        level: u32,
    },
    /// Irreducible character of a minimal-model primary as a q-expansion.
    Character {
        #[arg(long = "P")]
        p_mod: u32,
        #[arg(long = "Q")]
        q_mod: u32,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        levels: u32,
    },
    /// Virasoro commutator defect of a free-field realisation.
    FockCheck {
        #[arg(long, value_enum)]
        model: FockKind,
        /// Boson zero-mode charge; ignored for fermion sectors.
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true, default_value = "0")]
        alpha: BigRational,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, default_value_t = 8)]
        cutoff: u32,
    },
    /// Free-field correlation functions on the plane.
    Correlator {
        #[command(subcommand)]
        kind: CorrelatorKind,
    },
    /// Fusion rules and Verlinde dimensions.
    Fusion {
        #[command(subcommand)]
        kind: FusionKind,
    },
    /// Rational curve counts N(1)..N(dmax) in the projective plane.
    Gw {
        #[arg(long)]
        dmax: u32,
    },
    /// WDVV associativity residual of the CP^2 potential.
    Wdvv {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t0: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t1: f64,
        #[arg(long, allow_negative_numbers = true)]
        t2: f64,
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
        #[arg(long, default_value_t = 5)]
        dmax: u32,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        e: usize,
        #[arg(long)]
        f: usize,
    },
    /// Max T and S modular residuals of a partition function over a
    /// fixed five-point tau grid with Im tau in [0.7, 2].
    CheckModular {
        #[arg(long, value_enum)]
        model: ModularKind,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true, conflicts_with = "radius")]
        radius_sq: Option<BigRational>,
        #[arg(long = "P")]
        p_mod: Option<u32>,
        #[arg(long = "Q")]
        q_mod: Option<u32>,
        #[arg(long, default_value_t = 24)]
        levels: u32,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum ZModel {
    /// Compactified boson; pass --radius or an exact --radius-sq.
    Boson {
        #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
        tau: Complex64,
        #[arg(long, required_unless_present = "radius_sq", conflicts_with = "radius_sq")]
        radius: Option<f64>,
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        radius_sq: Option<BigRational>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Majorana fermion (Ising).
    Majorana {
        #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
        tau: Complex64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Dirac fermion.
    Dirac {
        #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
        tau: Complex64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Diagonal minimal model M(P, Q) from its characters.
    Minimal {
        #[arg(long = "P")]
        p_mod: u32,
        #[arg(long = "Q")]
        q_mod: u32,
        #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
        tau: Complex64,
        #[arg(long, default_value_t = 24)]
        levels: u32,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum CorrelatorKind {
    /// Vertex operator correlator; repeat --insertion z,alpha.
    Vertex {
        #[arg(long = "insertion", value_parser = parse_insertion_arg, allow_hyphen_values = true, required = true)]
        insertions: Vec<(Complex64, BigRational)>,
    },
    /// Free-fermion n-point function; repeat --point.
    Psi {
        #[arg(long = "point", value_parser = parse_complex_arg, allow_hyphen_values = true, required = true)]
        points: Vec<Complex64>,
    },
    /// Ising spin four-point function; exactly four --point flags.
    Sigma4 {
        #[arg(long = "point", value_parser = parse_complex_arg, allow_hyphen_values = true, required = true)]
        points: Vec<Complex64>,
    },
    /// Ghost two-point function <b(w) c(z)>.
    Bc {
        #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
        w: Complex64,
        #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
        z: Complex64,
    },
}

#[derive(Subcommand)]
enum FusionKind {
    /// Admissibility of an su(2)_k three-point coupling.
    Su2 {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l1: u32,
        #[arg(long)]
        l2: u32,
        #[arg(long)]
        l3: u32,
    },
    /// Fusion of a generating primary into a Kac-table entry of M(P, Q).
    Minimal {
        #[arg(long = "P")]
        p_mod: u32,
        #[arg(long = "Q")]
        q_mod: u32,
        #[arg(long, value_enum)]
        generator: GeneratorKind,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
    },
    /// Verlinde dimension for su(2)_k at genus g with boundary weights.
    Verlinde {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        #[arg(long, value_delimiter = ',')]
        weights: Vec<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FockKind {
    Boson,
    Ns,
    R,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeneratorKind {
    Phi11,
    Phi12,
    Phi21,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModularKind {
    Boson,
    Majorana,
    Minimal,
}

/// Five tau samples with Im tau spanning [0.7, 2].
const TAU_GRID: [(f64, f64); 5] = [
    (-0.40, 0.700),
    (-0.15, 1.025),
    (0.10, 1.350),
    (0.35, 1.675),
    (0.60, 2.000),
];

type Output = cft_core::Result<(Value, Value)>;

fn diag_tol(tol: f64) -> Value {
    json!({ "tolerance": fnum(tol) })
}

fn big_number(text: String) -> Value {
    Value::Number(Number::from_str(&text).expect("integer is valid JSON"))
}

fn run(command: Command) -> (String, Value, Output) {
    match command {
        Command::Eta { tau, tol } => {
            let inputs = json!({ "tau": fcomplex(tau), "tol": fnum(tol) });
            let out = TorusPoint::new(tau)
                .and_then(|tp| eta_eval(&tp, tol))
                .map(|v| (fcomplex(v), diag_tol(tol)));
            ("eta".into(), inputs, out)
        }
        Command::Theta { index, w, tau, tol } => {
            let inputs = json!({
                "index": index, "w": fcomplex(w), "tau": fcomplex(tau), "tol": fnum(tol)
            });
            let out = TorusPoint::new(tau)
                .and_then(|tp| theta_eval(index, w, &tp, tol))
                .map(|v| (fcomplex(v), diag_tol(tol)));
            ("theta".into(), inputs, out)
        }
        Command::PartitionCount { n } => {
            let inputs = json!({ "n": n });
            let out = Ok((big_number(partition_count(n).to_string()), json!({})));
            ("partition-count".into(), inputs, out)
        }
        Command::Z { model } => run_z(model),
        Command::KacTable { p_mod, q_mod } => {
            let inputs = json!({ "P": p_mod, "Q": q_mod });
            let out = kac_table_classes(p_mod, q_mod).and_then(|classes| {
                let c = minimal_central_charge(p_mod, q_mod)?;
                let mut weights = Vec::new();
                for (p, q) in classes {
                    let h = minimal_weight(p_mod, q_mod, p, q)?;
                    weights.push(json!({ "p": p, "q": q, "h": frat(&h) }));
                }
                Ok((json!({ "c": frat(&c), "weights": weights }), json!({})))
            });
            ("kac-table".into(), inputs, out)
        }
        Command::Gram { c, h, level } => {
            let inputs = json!({ "c": frat(&c), "h": frat(&h), "level": level });
            let rows: Vec<Value> = gram_matrix(&c, &h, level)
                .iter()
                .map(|row| Value::Array(row.iter().map(frat).collect()))
                .collect();
            ("gram".into(), inputs, Ok((Value::Array(rows), json!({}))))
        }
        Command::KacDet { m, h, level } => {
            let inputs = json!({ "m": frat(&m), "h": frat(&h), "level": level });
            let out = central_charge_from_m(&m).and_then(|c| {
                let det = det_rational(&gram_matrix(&c, &h, level));
                let closed = kac_determinant_closed(&m, &h, level)?;
                let result = json!({
                    "gram_det": frat(&det),
                    "closed_form": frat(&closed),
                    "equal": det == closed,
                });
                Ok((result, json!({ "c": frat(&c) })))
            });
            ("kac-det".into(), inputs, out)
        }
        Command::Nullvec { c, h, level } => {
            let inputs = json!({ "c": frat(&c), "h": frat(&h), "level": level });
            let vectors: Vec<Value> = null_vectors(&c, &h, level)
                .iter()
                .map(|v| {
                    Value::Array(
                        v.coeffs()
                            .map(|(d, coeff)| json!({ "parts": d.parts(), "coeff": frat(coeff) }))
                            .collect(),
                    )
                })
                .collect();
            ("nullvec".into(), inputs, Ok((Value::Array(vectors), json!({}))))
        }
        Command::Character { p_mod, q_mod, p, q, levels } => {
            let inputs = json!({ "P": p_mod, "Q": q_mod, "p": p, "q": q, "levels": levels });
            let out = irreducible_character(p_mod, q_mod, p, q, levels).map(|series| {
                let terms: Vec<Value> = series
                    .terms()
                    .map(|(expo, coeff)| {
                        json!({ "exponent": frat(expo), "coefficient": frat(coeff) })
                    })
                    .collect();
                let diag = json!({ "truncation": frat(series.truncation_order()) });
                (Value::Array(terms), diag)
            });
            ("character".into(), inputs, out)
        }
        Command::FockCheck { model, alpha, n, m, cutoff } => {
            let (name, fock_model) = match model {
                FockKind::Boson => ("boson", FockModel::Boson { alpha: alpha.clone() }),
                FockKind::Ns => ("ns", FockModel::Fermion { sector: Sector::Ns }),
                FockKind::R => ("r", FockModel::Fermion { sector: Sector::R }),
            };
            let inputs = json!({
                "model": name, "alpha": frat(&alpha), "n": n, "m": m, "cutoff": cutoff
            });
            let out = virasoro_defect(n, m, &fock_model, cutoff).map(|defect| {
                let max_abs = defect.max_abs().unwrap_or_default();
                let result = json!({
                    "dim": defect.dim(),
                    "nonzero_entries": defect.num_entries(),
                    "max_abs": frat(&max_abs),
                    "zero": defect.is_zero(),
                });
                (result, json!({ "central_charge": frat(&fock_model.central_charge()) }))
            });
            ("fock-check".into(), inputs, out)
        }
        Command::Correlator { kind } => run_correlator(kind),
        Command::Fusion { kind } => run_fusion(kind),
        Command::Gw { dmax } => {
            let inputs = json!({ "dmax": dmax });
            let table = km_counts(dmax);
            let mut counts = Map::new();
            for d in 1..=dmax {
                counts.insert(d.to_string(), fbig(table.count(d)));
            }
            ("gw".into(), inputs, Ok((Value::Object(counts), json!({}))))
        }
        Command::Wdvv { t0, t1, t2, q, dmax, a, b, e, f } => {
            let inputs = json!({
                "t0": fnum(t0), "t1": fnum(t1), "t2": fnum(t2), "q": fnum(q),
                "dmax": dmax, "a": a, "b": b, "e": e, "f": f
            });
            let point = Cp2Point { t0, t1, t2, q };
            let out = wdvv_residual(point, dmax, (a, b, e, f)).map(|report| {
                (
                    json!({ "residual": fnum(report.residual) }),
                    json!({ "truncation": fnum(report.truncation_bound) }),
                )
            });
            ("wdvv".into(), inputs, out)
        }
        Command::CheckModular { model, radius, radius_sq, p_mod, q_mod, levels, tol } => {
            run_check_modular(model, radius, radius_sq, p_mod, q_mod, levels, tol)
        }
    }
}

fn run_z(model: ZModel) -> (String, Value, Output) {
    match model {
        ZModel::Boson { tau, radius, radius_sq, tol } => {
            let inputs = json!({
                "tau": fcomplex(tau),
                "radius": radius.map(fnum).unwrap_or(Value::Null),
                "radius_sq": radius_sq.as_ref().map(frat).unwrap_or(Value::Null),
                "tol": fnum(tol),
            });
            let out = TorusPoint::new(tau)
                .and_then(|tp| match (&radius_sq, radius) {
                    (Some(rs), _) => z_boson(&tp, rs, tol),
                    (None, Some(r)) => z_boson_radius(&tp, r, tol),
                    (None, None) => unreachable!("clap requires one of the two"),
                })
                .map(|v| (fnum(v), diag_tol(tol)));
            ("z boson".into(), inputs, out)
        }
        ZModel::Majorana { tau, tol } => {
            let inputs = json!({ "tau": fcomplex(tau), "tol": fnum(tol) });
            let out = TorusPoint::new(tau)
                .and_then(|tp| z_majorana(&tp, tol))
                .map(|v| (fnum(v), diag_tol(tol)));
            ("z majorana".into(), inputs, out)
        }
        ZModel::Dirac { tau, tol } => {
            let inputs = json!({ "tau": fcomplex(tau), "tol": fnum(tol) });
            let out = TorusPoint::new(tau)
                .and_then(|tp| z_dirac(&tp, tol))
                .map(|v| (fnum(v), diag_tol(tol)));
            ("z dirac".into(), inputs, out)
        }
        ZModel::Minimal { p_mod, q_mod, tau, levels, tol } => {
            let inputs = json!({
                "P": p_mod, "Q": q_mod, "tau": fcomplex(tau), "levels": levels, "tol": fnum(tol)
            });
            let out = TorusPoint::new(tau)
                .and_then(|tp| z_minimal(p_mod, q_mod, &tp, levels, tol))
                .map(|v| {
                    (fnum(v), json!({ "tolerance": fnum(tol), "truncation": levels }))
                });
            ("z minimal".into(), inputs, out)
        }
    }
}

fn run_correlator(kind: CorrelatorKind) -> (String, Value, Output) {
    match kind {
        CorrelatorKind::Vertex { insertions } => {
            let inputs = json!({
                "insertions": insertions
                    .iter()
                    .map(|(z, alpha)| json!({ "z": fcomplex(*z), "alpha": frat(alpha) }))
                    .collect::<Vec<_>>()
            });
            let out = insertions
                .iter()
                .map(|(z, alpha)| Ok((exact_complex(*z)?, alpha.clone())))
                .collect::<cft_core::Result<Vec<_>>>()
                .and_then(|exact| vertex_npoint(&exact))
                .map(|v| (fnum(v), json!({})));
            ("correlator vertex".into(), inputs, out)
        }
        CorrelatorKind::Psi { points } => {
            let inputs = json!({
                "points": points.iter().map(|z| fcomplex(*z)).collect::<Vec<_>>()
            });
            let out = points
                .iter()
                .map(|z| exact_complex(*z))
                .collect::<cft_core::Result<Vec<_>>>()
                .and_then(|exact| psi_npoint(&exact))
                .map(|v| (fcomplex(to_complex64(&v)), json!({})));
            ("correlator psi".into(), inputs, out)
        }
        CorrelatorKind::Sigma4 { points } => {
            let inputs = json!({
                "points": points.iter().map(|z| fcomplex(*z)).collect::<Vec<_>>()
            });
            let out = <[Complex64; 4]>::try_from(points.as_slice())
                .map_err(|_| {
                    CftError::InvalidArgument(format!(
                        "sigma4 needs exactly 4 points, got {}",
                        points.len()
                    ))
                })
                .and_then(|arr| sigma_four_point(&arr))
                .map(|v| (fnum(v), json!({})));
            ("correlator sigma4".into(), inputs, out)
        }
        CorrelatorKind::Bc { w, z } => {
            let inputs = json!({ "w": fcomplex(w), "z": fcomplex(z) });
            let out = bc_two_point(w, z).map(|v| (fcomplex(v), json!({})));
            ("correlator bc".into(), inputs, out)
        }
    }
}

fn run_fusion(kind: FusionKind) -> (String, Value, Output) {
    match kind {
        FusionKind::Su2 { k, l1, l2, l3 } => {
            let inputs = json!({ "k": k, "l1": l1, "l2": l2, "l3": l3 });
            let out = su2_fusion_admissible(l1, l2, l3, k)
                .map(|admissible| (Value::Bool(admissible), json!({})));
            ("fusion su2".into(), inputs, out)
        }
        FusionKind::Minimal { p_mod, q_mod, generator, p, q } => {
            let (name, gen) = match generator {
                GeneratorKind::Phi11 => ("phi11", FusionGenerator::Phi11),
                GeneratorKind::Phi12 => ("phi12", FusionGenerator::Phi12),
                GeneratorKind::Phi21 => ("phi21", FusionGenerator::Phi21),
            };
            let inputs = json!({
                "P": p_mod, "Q": q_mod, "generator": name, "p": p, "q": q
            });
            let out = minimal_fuse(gen, p, q, p_mod, q_mod).map(|channels| {
                let list: Vec<Value> = channels
                    .iter()
                    .map(|(a, b)| json!({ "p": a, "q": b }))
                    .collect();
                (Value::Array(list), json!({}))
            });
            ("fusion minimal".into(), inputs, out)
        }
        FusionKind::Verlinde { k, genus, weights } => {
            let inputs = json!({ "k": k, "genus": genus, "weights": weights });
            let out = verlinde_dim(k, genus, &weights).map(|dim| {
                let result = json!({
                    "raw": fnum(dim.raw),
                    "rounded": dim.rounded,
                    "residual": fnum(dim.residual),
                });
                (result, json!({}))
            });
            ("fusion verlinde".into(), inputs, out)
        }
    }
}

fn run_check_modular(
    model: ModularKind,
    radius: Option<f64>,
    radius_sq: Option<BigRational>,
    p_mod: Option<u32>,
    q_mod: Option<u32>,
    levels: u32,
    tol: f64,
) -> (String, Value, Output) {
    let name = match model {
        ModularKind::Boson => "boson",
        ModularKind::Majorana => "majorana",
        ModularKind::Minimal => "minimal",
    };
    let inputs = json!({
        "model": name,
        "radius": radius.map(fnum).unwrap_or(Value::Null),
        "radius_sq": radius_sq.as_ref().map(frat).unwrap_or(Value::Null),
        "P": p_mod, "Q": q_mod, "levels": levels, "tol": fnum(tol),
    });
    let z: Box<dyn Fn(&TorusPoint) -> cft_core::Result<f64>> = match model {
        ModularKind::Boson => match (radius_sq.clone(), radius) {
            (Some(rs), _) => Box::new(move |tp| z_boson(tp, &rs, tol)),
            (None, Some(r)) => Box::new(move |tp| z_boson_radius(tp, r, tol)),
            (None, None) => {
                let err = Err(CftError::InvalidArgument(
                    "the boson model needs --radius or --radius-sq".into(),
                ));
                return ("check-modular".into(), inputs, err);
            }
        },
        ModularKind::Majorana => Box::new(move |tp| z_majorana(tp, tol)),
        ModularKind::Minimal => match (p_mod, q_mod) {
            (Some(pm), Some(qm)) => Box::new(move |tp| z_minimal(pm, qm, tp, levels, tol)),
            _ => {
                let err = Err(CftError::InvalidArgument(
                    "the minimal model needs --P and --Q".into(),
                ));
                return ("check-modular".into(), inputs, err);
            }
        },
    };
    let out = (|| {
        let mut t_vals = Vec::new();
        let mut s_vals = Vec::new();
        let mut grid = Vec::new();
        for &(x, y) in &TAU_GRID {
            let tp = TorusPoint::new(Complex64::new(x, y))?;
            let res = modular_residuals(&z, &tp)?;
            t_vals.push(res.t_residual);
            s_vals.push(res.s_residual);
            grid.push(fcomplex(tp.tau()));
        }
        let max = |vals: &[f64]| vals.iter().cloned().fold(0.0f64, f64::max);
        let result = json!({ "t_max": fnum(max(&t_vals)), "s_max": fnum(max(&s_vals)) });
        let diagnostics = json!({
            "tolerance": fnum(tol),
            "residuals": {
                "t": t_vals.iter().map(|&v| fnum(v)).collect::<Vec<_>>(),
                "s": s_vals.iter().map(|&v| fnum(v)).collect::<Vec<_>>(),
            },
            "tau_grid": grid,
        });
        Ok((result, diagnostics))
    })();
    ("check-modular".into(), inputs, out)
}

fn main() {
    let cli = Cli::parse();
    let (command, inputs, outcome) = run(cli.command);
    let mut doc = Map::new();
    doc.insert("command".into(), Value::String(command));
    doc.insert("inputs".into(), inputs);
    let code = match outcome {
        Ok((result, diagnostics)) => {
            doc.insert("result".into(), result);
            doc.insert("diagnostics".into(), diagnostics);
            0
        }
        Err(err) => {
            doc.insert("error".into(), Value::String(err.to_string()));
            1
        }
    };
    println!("{}", Value::Object(doc));
    std::process::exit(code);
}
