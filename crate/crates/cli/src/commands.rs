//! Subcommand definitions and the dispatcher: every command produces a JSON
//! envelope `{command, status, result|error}` and an exit code (0 definite,
//! 2 unknown/inconclusive, 1 error).

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use kolchin_core::diffpoly::DiffPoly;
use kolchin_core::dsmod::{
    self, dual_matrices, gauge_transform, jet_module, sharp_jet_space, sharp_solve_constant,
    sharp_verify, DSigmaModule, SharpSpace,
};
use kolchin_core::geometry::{
    axiom_instance_verify, containment_check, dvariety_check, integrability_check,
    sharp_point_check, sigma_power_reduction, vstar_member, CheckStatus, DVariety, WitnessReport,
};
use kolchin_core::jets::{jet_separate, jet_space, JetSeparation};
use kolchin_core::linalg::Matrix;
use kolchin_core::polyalg::{
    self, Budget, CPoly, IdealBasis, MonomialOrder, NotPrimeWitness, PolyRing, Primality,
};
use kolchin_core::rittkolchin::{
    algebraic_snapshot, characteristic_set, is_char_set_of_prime, is_coherent, ritt_reduce,
    saturation_member, AutoreducedSet, CertFactor, CharsetCertification, RittError, SatAnswer,
    ThreeValued,
};
use kolchin_core::scalars::ScalarElement;

use crate::lower::{diff_to_order_zero, split_top_level, Context};
use crate::session::{BindingKind, Session};

#[derive(Parser, Debug)]
#[command(
    name = "kolchin",
    version,
    about = "Exact differential-difference algebra: Ritt-Kolchin reduction, Groebner bases, jet spaces, (Delta,sigma)-modules"
)]
pub struct Cli {
    /// Emit a single machine-readable JSON object on stdout
    #[arg(long, global = true)]
    pub json: bool,
    /// Session file (.dds.json) holding the ring context and bindings
    #[arg(long, global = true)]
    pub session: Option<PathBuf>,
    /// Number of differential indeterminates x1..xn
    #[arg(long, default_value_t = 1, global = true)]
    pub vars: usize,
    /// Number of derivations d1..dm
    #[arg(long, default_value_t = 1, global = true)]
    pub derivations: usize,
    /// Number of base indeterminates t1..tk in the coefficient field
    #[arg(long, default_value_t = 1, global = true)]
    pub base_vars: usize,
    /// Shift offsets c1..ck (comma-separated rationals): sigma(ti) = ti + ci
    #[arg(long, default_value = "1", global = true)]
    pub shift: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduced Groebner basis of the commutative ideal on the occurring indeterminates
    Gb {
        /// semicolon-separated generators
        #[arg(long)]
        gens: String,
        /// grevlex | lex | grlex
        #[arg(long, default_value = "grevlex")]
        order: String,
    },
    /// Ideal membership with a cofactor certificate
    Member {
        f: String,
        #[arg(long = "in")]
        ideal: String,
        #[arg(long, default_value = "grevlex")]
        order: String,
    },
    /// Saturation I : h^infinity by the extra-variable method
    Saturate {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        by: String,
        #[arg(long, default_value = "grevlex")]
        order: String,
    },
    /// Bounded three-valued primality of a commutative ideal
    #[command(name = "prime?")]
    Prime {
        #[arg(long)]
        gens: String,
    },
    /// Ritt reduction with certificate and trace
    Reduce {
        g: String,
        /// autoreduced-set elements (repeatable)
        #[arg(long = "by")]
        by: Vec<String>,
    },
    /// Ritt's characteristic-set process
    Charset {
        polys: Vec<String>,
    },
    /// Coherence of an autoreduced set (all delta-polynomials reduce to 0)
    #[command(name = "coherent?")]
    Coherent {
        polys: Vec<String>,
    },
    /// Membership in the saturation ideal [Lambda] : H^infinity
    #[command(name = "member?")]
    MemberSat {
        g: String,
        /// semicolon-separated autoreduced-set elements
        #[arg(long = "in")]
        set: String,
    },
    /// Is Lambda a characteristic set of a prime differential ideal?
    #[command(name = "primechar?")]
    PrimeChar {
        polys: Vec<String>,
    },
    /// Membership of a point in V*(Lambda) = V(Lambda) minus V(H)
    #[command(name = "vstar?")]
    VStar {
        #[arg(long)]
        set: String,
        #[arg(long)]
        point: String,
    },
    /// Containment hypothesis V*(Gamma) inside V(Lambda) x V(Lambda^sigma)
    #[command(name = "contain?")]
    Contain {
        /// Gamma over (x, y): the doubled variable context
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        lambda: String,
    },
    /// Verify one instance of the existential-closedness axiom scheme
    AxiomVerify {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        point: String,
    },
    /// The sigma-power product construction for V, W and k
    PowerTrick {
        #[arg(long, default_value = "")]
        v: String,
        #[arg(long)]
        w: String,
        #[arg(short)]
        k: usize,
    },
    /// D-variety conditions: derivation and integrability
    #[command(name = "dvar?")]
    Dvar {
        #[arg(long, default_value = "")]
        gens: String,
        /// sections: per derivation, n comma-separated polynomials; groups
        /// separated by '|'
        #[arg(long)]
        sections: String,
    },
    /// Sharp point test s_i(a) = delta_i(a)
    #[command(name = "sharp?")]
    Sharp {
        #[arg(long, default_value = "")]
        gens: String,
        #[arg(long)]
        sections: String,
        #[arg(long)]
        point: String,
    },
    /// Exact jet space j_r V_a as a kernel basis
    Jet {
        #[arg(long, default_value = "")]
        gens: String,
        #[arg(long)]
        at: String,
        #[arg(long)]
        order: u32,
    },
    /// Jet-separation test between two subvarieties through a point
    JetSep {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        at: String,
        #[arg(long)]
        max_order: u32,
    },
    /// Verify the (Delta,sigma)-module commutation identities
    DsmodCheck {
        /// connection matrices, one JSON matrix per derivation (repeatable)
        #[arg(long = "amat")]
        a: Vec<String>,
        #[arg(long = "bmat")]
        b: String,
    },
    /// Dual connection matrices A* = -A^T
    DsmodDual {
        #[arg(long = "amat")]
        a: Vec<String>,
    },
    /// Gauge transform by an invertible matrix P
    DsmodGauge {
        #[arg(long = "amat")]
        a: Vec<String>,
        #[arg(long = "bmat")]
        b: String,
        #[arg(long = "pmat")]
        p: String,
    },
    /// Sharp vectors: verify a fundamental matrix or solve the constant case
    DsmodSharp {
        #[arg(long = "amat")]
        a: Vec<String>,
        #[arg(long = "bmat")]
        b: String,
        /// candidate fundamental matrix to verify
        #[arg(long)]
        matrix: Option<String>,
        /// candidate sharp vectors (JSON array of vectors) to verify
        #[arg(long)]
        candidates: Option<String>,
    },
    /// The induced (Delta,sigma)-module on j_r V_a
    JetModule {
        #[arg(long, default_value = "")]
        gens: String,
        #[arg(long)]
        sections: String,
        #[arg(long)]
        point: String,
        /// the morphism onto V^sigma, n comma-separated polynomials
        #[arg(long)]
        phi: String,
        #[arg(long)]
        order: u32,
    },
    /// Store a named binding in the session (reference it as @name)
    Bind {
        name: String,
        text: String,
        #[arg(long, default_value = "poly")]
        kind: String,
    },
}

pub struct Outcome {
    pub value: Value,
    pub exit_code: i32,
}

fn ok(command: &str, result: Value) -> Outcome {
    Outcome {
        value: json!({ "command": command, "status": "ok", "result": result }),
        exit_code: 0,
    }
}

fn unknown(command: &str, result: Value) -> Outcome {
    Outcome {
        value: json!({ "command": command, "status": "unknown", "result": result }),
        exit_code: 2,
    }
}

pub fn error(command: &str, message: impl std::fmt::Display) -> Outcome {
    Outcome {
        value: json!({ "command": command, "status": "error", "error": message.to_string() }),
        exit_code: 1,
    }
}

/// Budget from the environment override `KOLCHIN_BUDGET`, e.g.
/// `degree=32,basis=1024,pairs=100000,factor=40000`.
pub fn budget_from_env() -> Budget {
    let mut budget = Budget::default();
    if let Ok(spec) = std::env::var("KOLCHIN_BUDGET") {
        for piece in spec.split(',') {
            let Some((key, value)) = piece.split_once('=') else {
                continue;
            };
            let Ok(v) = value.trim().parse::<usize>() else {
                continue;
            };
            match key.trim() {
                "degree" => budget.max_degree = v as u32,
                "basis" => budget.max_basis = v,
                "pairs" => budget.max_pairs = v,
                "factor" => budget.max_factor_combinations = v,
                _ => {}
            }
        }
    }
    budget
}

fn order_from(name: &str) -> Result<MonomialOrder, String> {
    match name {
        "grevlex" => Ok(MonomialOrder::GrevLex),
        "lex" => Ok(MonomialOrder::Lex),
        "grlex" => Ok(MonomialOrder::GrLex),
        other => Err(format!("unknown order '{other}' (grevlex | lex | grlex)")),
    }
}

fn status_json(s: CheckStatus) -> Value {
    Value::String(s.to_string())
}

fn report_json(r: &WitnessReport) -> Value {
    json!({
        "overall": status_json(r.overall()),
        "checks": r.checks.iter().map(|c| json!({
            "name": c.name,
            "status": status_json(c.status),
            "witness": c.witness,
        })).collect::<Vec<_>>(),
    })
}

fn report_outcome(command: &str, r: &WitnessReport) -> Outcome {
    match r.overall() {
        CheckStatus::Unknown => unknown(command, report_json(r)),
        _ => ok(command, report_json(r)),
    }
}

fn certification_json(c: &CharsetCertification) -> Value {
    json!({
        "coherent": c.coherence.coherent,
        "coherence_failures": c.coherence.failures,
        "algebraic_vars": c.algebraic_vars,
        "saturation_basis": c.saturation_basis,
        "primality": c.primality.as_ref().map(|p| match p {
            Primality::Prime(e) => format!("prime ({e:?})"),
            Primality::NotPrime(w) => format!("not prime ({})", witness_string(w)),
            Primality::Unknown(r) => format!("unknown ({r})"),
        }),
        "probes_checked": c.probes_checked,
        "probe_hit": c.probe_hit,
        "note": c.note,
    })
}

fn witness_string(w: &NotPrimeWitness) -> String {
    match w {
        NotPrimeWitness::UnitIdeal => "saturation is unit ideal".to_string(),
        NotPrimeWitness::ZeroDivisors { f, g, .. } => format!("({f}) * ({g}) lies in the ideal"),
    }
}

fn string_list<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> Value {
    Value::Array(
        items
            .into_iter()
            .map(|s| Value::String(s.to_string()))
            .collect(),
    )
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| string_list(m.row(i).iter()))
            .collect(),
    )
}

fn vector_json(v: &[ScalarElement]) -> Value {
    string_list(v.iter())
}

fn sharp_json(s: &SharpSpace) -> Value {
    json!({
        "dim": s.dim(),
        "basis": s.basis.iter().map(|v| vector_json(v)).collect::<Vec<_>>(),
        "complete": s.complete,
        "caveat": s.caveat(),
    })
}

struct Ctx<'a> {
    session: &'a Session,
    budget: Budget,
}

impl<'a> Ctx<'a> {
    fn context(&self) -> &Context {
        &self.session.context
    }

    fn polys(&self, text: &str) -> Result<Vec<DiffPoly>, String> {
        let resolved = self.session.resolve(text).map_err(|e| e.to_string())?;
        self.context().parse_polys(resolved).map_err(|e| e.to_string())
    }

    fn polys_doubled(&self, text: &str) -> Result<Vec<DiffPoly>, String> {
        let resolved = self.session.resolve(text).map_err(|e| e.to_string())?;
        self.context()
            .doubled()
            .parse_polys(resolved)
            .map_err(|e| e.to_string())
    }

    fn poly_list(&self, items: &[String]) -> Result<Vec<DiffPoly>, String> {
        let mut out = Vec::new();
        for item in items {
            out.extend(self.polys(item)?);
        }
        Ok(out)
    }

    fn point(&self, text: &str) -> Result<Vec<ScalarElement>, String> {
        let resolved = self.session.resolve(text).map_err(|e| e.to_string())?;
        self.context().parse_point(resolved).map_err(|e| e.to_string())
    }

    fn autoreduced(&self, polys: Vec<DiffPoly>) -> Result<AutoreducedSet, String> {
        AutoreducedSet::new(polys).map_err(|e| e.to_string())
    }

    fn cpolys(&self, text: &str, ring: &Arc<PolyRing>) -> Result<Vec<CPoly>, String> {
        let polys = self.polys(text)?;
        polys
            .iter()
            .map(|p| diff_to_order_zero(p, ring).map_err(|e| e.to_string()))
            .collect()
    }

    /// `p1,p2|p3,p4`: one group of `n` polynomials per derivation.
    fn sections(&self, text: &str, ring: &Arc<PolyRing>) -> Result<Vec<Vec<CPoly>>, String> {
        let resolved = self.session.resolve(text).map_err(|e| e.to_string())?;
        let m = self.context().derivations;
        let n = self.context().vars;
        let groups: Vec<&str> = resolved.split('|').collect();
        if groups.len() != m {
            return Err(format!("expected {m} section groups separated by '|'"));
        }
        let mut out = Vec::new();
        for group in groups {
            let comps: Vec<CPoly> = split_top_level(group, ',')
                .into_iter()
                .map(|piece| {
                    let p = self.context().parse_poly(piece.trim()).map_err(|e| e.to_string())?;
                    diff_to_order_zero(&p, ring).map_err(|e| e.to_string())
                })
                .collect::<Result<_, String>>()?;
            if comps.len() != n {
                return Err(format!("each section needs {n} components"));
            }
            out.push(comps);
        }
        Ok(out)
    }

    fn matrix(&self, text: &str) -> Result<Matrix, String> {
        let resolved = self.session.resolve(text).map_err(|e| e.to_string())?;
        let rows: Vec<Vec<String>> =
            serde_json::from_str(resolved).map_err(|e| format!("matrix must be a JSON array of arrays of scalar strings: {e}"))?;
        let parsed: Vec<Vec<ScalarElement>> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| self.context().parse_scalar(s).map_err(|e| e.to_string()))
                    .collect::<Result<_, String>>()
            })
            .collect::<Result<_, String>>()?;
        if parsed.is_empty() {
            return Err("empty matrix".into());
        }
        Ok(Matrix::from_rows(self.context().base_vars, parsed))
    }

    fn module(&self, a: &[String], b: &str) -> Result<DSigmaModule, String> {
        let a_mats: Vec<Matrix> = a.iter().map(|s| self.matrix(s)).collect::<Result<_, _>>()?;
        let b_mat = self.matrix(b)?;
        DSigmaModule::new_unchecked(self.context().field(), a_mats, b_mat).map_err(|e| e.to_string())
    }

    fn dvariety(&self, gens: &str, sections: &str) -> Result<(DVariety, WitnessReport), String> {
        let ring = self.context().poly_ring();
        let gens = if gens.trim().is_empty() {
            vec![]
        } else {
            self.cpolys(gens, &ring)?
        };
        let sections = self.sections(sections, &ring)?;
        DVariety::new(ring, gens, sections, &self.budget).map_err(|e| e.to_string())
    }
}

pub fn run(cli: &Cli, session: &Session) -> Outcome {
    let ctx = Ctx {
        session,
        budget: budget_from_env(),
    };
    match &cli.command {
        Command::Gb { gens, order } => cmd_gb(&ctx, gens, order),
        Command::Member { f, ideal, order } => cmd_member(&ctx, f, ideal, order),
        Command::Saturate { gens, by, order } => cmd_saturate(&ctx, gens, by, order),
        Command::Prime { gens } => cmd_prime(&ctx, gens),
        Command::Reduce { g, by } => cmd_reduce(&ctx, g, by),
        Command::Charset { polys } => cmd_charset(&ctx, polys),
        Command::Coherent { polys } => cmd_coherent(&ctx, polys),
        Command::MemberSat { g, set } => cmd_member_sat(&ctx, g, set),
        Command::PrimeChar { polys } => cmd_primechar(&ctx, polys),
        Command::VStar { set, point } => cmd_vstar(&ctx, set, point),
        Command::Contain { gamma, lambda } => cmd_contain(&ctx, gamma, lambda),
        Command::AxiomVerify {
            lambda,
            gamma,
            point,
        } => cmd_axiom_verify(&ctx, lambda, gamma, point),
        Command::PowerTrick { v, w, k } => cmd_power_trick(&ctx, v, w, *k),
        Command::Dvar { gens, sections } => cmd_dvar(&ctx, gens, sections),
        Command::Sharp {
            gens,
            sections,
            point,
        } => cmd_sharp(&ctx, gens, sections, point),
        Command::Jet { gens, at, order } => cmd_jet(&ctx, gens, at, *order),
        Command::JetSep {
            x,
            y,
            at,
            max_order,
        } => cmd_jet_sep(&ctx, x, y, at, *max_order),
        Command::DsmodCheck { a, b } => cmd_dsmod_check(&ctx, a, b),
        Command::DsmodDual { a } => cmd_dsmod_dual(&ctx, a),
        Command::DsmodGauge { a, b, p } => cmd_dsmod_gauge(&ctx, a, b, p),
        Command::DsmodSharp {
            a,
            b,
            matrix,
            candidates,
        } => cmd_dsmod_sharp(&ctx, a, b, matrix.as_deref(), candidates.as_deref()),
        Command::JetModule {
            gens,
            sections,
            point,
            phi,
            order,
        } => cmd_jet_module(&ctx, gens, sections, point, phi, *order),
        Command::Bind { .. } => unreachable!("bind is handled by the driver"),
    }
}

pub fn binding_kind(name: &str) -> Result<BindingKind, String> {
    match name {
        "poly" => Ok(BindingKind::Poly),
        "scalar" => Ok(BindingKind::Scalar),
        "point" => Ok(BindingKind::Point),
        other => Err(format!("unknown binding kind '{other}' (poly | scalar | point)")),
    }
}

fn snapshot_ideal(
    polys: &[DiffPoly],
    order: MonomialOrder,
) -> (Arc<PolyRing>, IdealBasis, Vec<CPoly>) {
    let refs: Vec<&DiffPoly> = polys.iter().collect();
    let (ring, converted) = algebraic_snapshot(&refs);
    let basis = IdealBasis::new(ring.clone(), converted.clone(), order);
    (ring, basis, converted)
}

fn cmd_gb(ctx: &Ctx, gens: &str, order: &str) -> Outcome {
    let cmd = "gb";
    let order = match order_from(order) {
        Ok(o) => o,
        Err(e) => return error(cmd, e),
    };
    let polys = match ctx.polys(gens) {
        Ok(p) if !p.is_empty() => p,
        Ok(_) => return error(cmd, "no generators given"),
        Err(e) => return error(cmd, e),
    };
    if polys.iter().any(|p| p.contains_sigma_moved()) {
        return error(cmd, "gb expects sigma-free polynomials (prolong first)");
    }
    let (ring, basis, _) = snapshot_ideal(&polys, order);
    match polyalg::groebner(&basis, &ctx.budget) {
        Ok(gb) => ok(
            cmd,
            json!({
                "vars": ring.vars(),
                "basis": string_list(gb.gens.iter()),
            }),
        ),
        Err(e) => error(cmd, e),
    }
}

fn cmd_member(ctx: &Ctx, f: &str, ideal: &str, order: &str) -> Outcome {
    let cmd = "member";
    let order = match order_from(order) {
        Ok(o) => o,
        Err(e) => return error(cmd, e),
    };
    let mut polys = match ctx.polys(ideal) {
        Ok(p) if !p.is_empty() => p,
        Ok(_) => return error(cmd, "no generators given"),
        Err(e) => return error(cmd, e),
    };
    let fpoly = match ctx.polys(f) {
        Ok(mut ps) if ps.len() == 1 => ps.remove(0),
        Ok(_) => return error(cmd, "member takes a single polynomial"),
        Err(e) => return error(cmd, e),
    };
    polys.push(fpoly);
    let (_, _, mut converted) = snapshot_ideal(&polys, order);
    let f_c = converted.pop().unwrap();
    let ring = f_c.ring().clone();
    let basis = IdealBasis::new(ring, converted, order);
    match polyalg::ideal_member(&f_c, &basis, &ctx.budget) {
        Ok(polyalg::MembershipAnswer::Member { cofactors }) => ok(
            cmd,
            json!({
                "answer": true,
                "cofactors": string_list(cofactors.iter()),
            }),
        ),
        Ok(polyalg::MembershipAnswer::NotMember { normal_form }) => ok(
            cmd,
            json!({
                "answer": false,
                "normal_form": normal_form.to_string(),
            }),
        ),
        Err(e) => error(cmd, e),
    }
}

fn cmd_saturate(ctx: &Ctx, gens: &str, by: &str, order: &str) -> Outcome {
    let cmd = "saturate";
    let order = match order_from(order) {
        Ok(o) => o,
        Err(e) => return error(cmd, e),
    };
    let mut polys = match ctx.polys(gens) {
        Ok(p) if !p.is_empty() => p,
        Ok(_) => return error(cmd, "no generators given"),
        Err(e) => return error(cmd, e),
    };
    let h = match ctx.polys(by) {
        Ok(mut ps) if ps.len() == 1 => ps.remove(0),
        Ok(_) => return error(cmd, "saturate takes a single divisor"),
        Err(e) => return error(cmd, e),
    };
    polys.push(h);
    let (ring, _, mut converted) = snapshot_ideal(&polys, order);
    let h_c = converted.pop().unwrap();
    let basis = IdealBasis::new(ring.clone(), converted, order);
    match polyalg::saturate(&basis, &h_c, &ctx.budget) {
        Ok(sat) => ok(
            cmd,
            json!({
                "vars": ring.vars(),
                "basis": string_list(sat.gens.iter()),
            }),
        ),
        Err(e) => error(cmd, e),
    }
}

fn cmd_prime(ctx: &Ctx, gens: &str) -> Outcome {
    let cmd = "prime?";
    let polys = match ctx.polys(gens) {
        Ok(p) if !p.is_empty() => p,
        Ok(_) => return error(cmd, "no generators given"),
        Err(e) => return error(cmd, e),
    };
    let (_, basis, _) = snapshot_ideal(&polys, MonomialOrder::GrevLex);
    match polyalg::is_prime_bounded(&basis, &ctx.budget) {
        Ok(Primality::Prime(ev)) => ok(
            cmd,
            json!({ "answer": "prime", "evidence": format!("{ev:?}") }),
        ),
        Ok(Primality::NotPrime(w)) => ok(
            cmd,
            json!({ "answer": "not_prime", "witness": witness_string(&w) }),
        ),
        Ok(Primality::Unknown(reason)) => {
            unknown(cmd, json!({ "answer": "unknown", "reason": reason }))
        }
        Err(e) => error(cmd, e),
    }
}

fn cmd_reduce(ctx: &Ctx, g: &str, by: &[String]) -> Outcome {
    let cmd = "reduce";
    let set = match ctx.poly_list(by).and_then(|p| ctx.autoreduced(p)) {
        Ok(s) => s,
        Err(e) => return error(cmd, e),
    };
    let g = match ctx.polys(g) {
        Ok(mut ps) if ps.len() == 1 => ps.remove(0),
        Ok(_) => return error(cmd, "reduce takes a single polynomial"),
        Err(e) => return error(cmd, e),
    };
    match ritt_reduce(&g, &set) {
        Ok(rr) => {
            let verified = rr.verify(&g, &set).unwrap_or(false);
            ok(
                cmd,
                json!({
                    "remainder": rr.remainder.to_string(),
                    "certificate": rr.certificate.iter().map(|c| json!({
                        "element": c.element + 1,
                        "factor": match c.factor { CertFactor::Separant => "sep", CertFactor::Initial => "init" },
                        "power": c.power,
                    })).collect::<Vec<_>>(),
                    "saturation_exponent": rr.saturation_exponent(),
                    "trace_terms": rr.trace.len(),
                    "verified": verified,
                }),
            )
        }
        Err(e) => error(cmd, e),
    }
}

fn cmd_charset(ctx: &Ctx, polys: &[String]) -> Outcome {
    let cmd = "charset";
    let system = match ctx.poly_list(polys) {
        Ok(p) if !p.is_empty() => p,
        Ok(_) => return error(cmd, "no polynomials given"),
        Err(e) => return error(cmd, e),
    };
    match characteristic_set(&system) {
        Ok(set) => ok(
            cmd,
            json!({
                "elements": string_list(set.elements().iter()),
                "h_product": set.h_product().to_string(),
            }),
        ),
        Err(e @ RittError::Inconsistent { .. }) => error(cmd, e),
        Err(e) => error(cmd, e),
    }
}

fn cmd_coherent(ctx: &Ctx, polys: &[String]) -> Outcome {
    let cmd = "coherent?";
    let set = match ctx.poly_list(polys).and_then(|p| ctx.autoreduced(p)) {
        Ok(s) => s,
        Err(e) => return error(cmd, e),
    };
    match is_coherent(&set) {
        Ok(rep) => ok(
            cmd,
            json!({ "answer": rep.coherent, "failures": rep.failures }),
        ),
        Err(e) => error(cmd, e),
    }
}

fn cmd_member_sat(ctx: &Ctx, g: &str, set: &str) -> Outcome {
    let cmd = "member?";
    let set = match ctx.polys(set).and_then(|p| ctx.autoreduced(p)) {
        Ok(s) => s,
        Err(e) => return error(cmd, e),
    };
    let g = match ctx.polys(g) {
        Ok(mut ps) if ps.len() == 1 => ps.remove(0),
        Ok(_) => return error(cmd, "member? takes a single polynomial"),
        Err(e) => return error(cmd, e),
    };
    match saturation_member(&g, &set, &ctx.budget) {
        Ok(sm) => {
            let result = json!({
                "answer": match sm.answer {
                    SatAnswer::Yes => "yes",
                    SatAnswer::No => "no",
                    SatAnswer::Unknown => "unknown",
                },
                "remainder": sm.reduction.remainder.to_string(),
                "saturation_exponent": sm.reduction.saturation_exponent(),
                "certification": sm.certification.as_ref().map(certification_json),
            });
            match sm.answer {
                SatAnswer::Unknown => unknown(cmd, result),
                _ => ok(cmd, result),
            }
        }
        Err(e) => error(cmd, e),
    }
}

fn cmd_primechar(ctx: &Ctx, polys: &[String]) -> Outcome {
    let cmd = "primechar?";
    let set = match ctx.poly_list(polys).and_then(|p| ctx.autoreduced(p)) {
        Ok(s) => s,
        Err(e) => return error(cmd, e),
    };
    match is_char_set_of_prime(&set, &ctx.budget) {
        Ok(cert) => {
            let result = json!({
                "answer": match cert.verdict {
                    ThreeValued::True => Value::Bool(true),
                    ThreeValued::False => Value::Bool(false),
                    ThreeValued::Unknown => Value::String("unknown".into()),
                },
                "note": cert.note,
                "evidence": certification_json(&cert),
            });
            match cert.verdict {
                ThreeValued::Unknown => unknown(cmd, result),
                _ => ok(cmd, result),
            }
        }
        Err(e) => error(cmd, e),
    }
}

fn cmd_vstar(ctx: &Ctx, set: &str, point: &str) -> Outcome {
    let cmd = "vstar?";
    let set = match ctx.polys(set).and_then(|p| ctx.autoreduced(p)) {
        Ok(s) => s,
        Err(e) => return error(cmd, e),
    };
    let a = match ctx.point(point) {
        Ok(a) => a,
        Err(e) => return error(cmd, e),
    };
    match vstar_member(&a, &set) {
        Ok(answer) => ok(cmd, json!({ "answer": answer })),
        Err(e) => error(cmd, e),
    }
}

fn cmd_contain(ctx: &Ctx, gamma: &str, lambda: &str) -> Outcome {
    let cmd = "contain?";
    let gamma = match ctx.polys_doubled(gamma).and_then(|p| ctx.autoreduced(p)) {
        Ok(s) => s,
        Err(e) => return error(cmd, e),
    };
    let lambda = match ctx.polys(lambda).and_then(|p| ctx.autoreduced(p)) {
        Ok(s) => s,
        Err(e) => return error(cmd, e),
    };
    match containment_check(&gamma, &lambda, &ctx.budget) {
        Ok(rep) => report_outcome(cmd, &rep),
        Err(e) => error(cmd, e),
    }
}

fn cmd_axiom_verify(ctx: &Ctx, lambda: &str, gamma: &str, point: &str) -> Outcome {
    let cmd = "axiom-verify";
    let lambda = match ctx.polys(lambda).and_then(|p| ctx.autoreduced(p)) {
        Ok(s) => s,
        Err(e) => return error(cmd, e),
    };
    let gamma = match ctx.polys_doubled(gamma).and_then(|p| ctx.autoreduced(p)) {
        Ok(s) => s,
        Err(e) => return error(cmd, e),
    };
    let a = match ctx.point(point) {
        Ok(a) => a,
        Err(e) => return error(cmd, e),
    };
    match axiom_instance_verify(&lambda, &gamma, &a, &ctx.budget) {
        Ok(rep) => report_outcome(cmd, &rep),
        Err(e) => error(cmd, e),
    }
}

fn cmd_power_trick(ctx: &Ctx, v: &str, w: &str, k: usize) -> Outcome {
    let cmd = "power-trick";
    let v_gens = if v.trim().is_empty() {
        vec![]
    } else {
        match ctx.polys(v) {
            Ok(p) => p,
            Err(e) => return error(cmd, e),
        }
    };
    let w_gens = match ctx.polys_doubled(w) {
        Ok(p) => p,
        Err(e) => return error(cmd, e),
    };
    match sigma_power_reduction(&v_gens, &w_gens, k) {
        Ok((v_t, w_t)) => ok(
            cmd,
            json!({
                "v_tilde": string_list(v_t.iter()),
                "w_tilde": string_list(w_t.iter()),
            }),
        ),
        Err(e) => error(cmd, e),
    }
}

fn cmd_dvar(ctx: &Ctx, gens: &str, sections: &str) -> Outcome {
    let cmd = "dvar?";
    let ring = ctx.context().poly_ring();
    let gens = if gens.trim().is_empty() {
        vec![]
    } else {
        match ctx.cpolys(gens, &ring) {
            Ok(g) => g,
            Err(e) => return error(cmd, e),
        }
    };
    let sections = match ctx.sections(sections, &ring) {
        Ok(s) => s,
        Err(e) => return error(cmd, e),
    };
    let mut report = match dvariety_check(&ring, &gens, &sections, &ctx.budget) {
        Ok(r) => r,
        Err(e) => return error(cmd, e),
    };
    match integrability_check(&ring, &gens, &sections, &ctx.budget) {
        Ok(r) => report.checks.extend(r.checks),
        Err(e) => return error(cmd, e),
    }
    report_outcome(cmd, &report)
}

fn cmd_sharp(ctx: &Ctx, gens: &str, sections: &str, point: &str) -> Outcome {
    let cmd = "sharp?";
    let (variety, _) = match ctx.dvariety(gens, sections) {
        Ok(v) => v,
        Err(e) => return error(cmd, e),
    };
    let a = match ctx.point(point) {
        Ok(a) => a,
        Err(e) => return error(cmd, e),
    };
    match sharp_point_check(&variety, &a) {
        Ok(answer) => ok(cmd, json!({ "answer": answer })),
        Err(e) => error(cmd, e),
    }
}

fn cmd_jet(ctx: &Ctx, gens: &str, at: &str, order: u32) -> Outcome {
    let cmd = "jet";
    let ring = ctx.context().poly_ring();
    let gens = if gens.trim().is_empty() {
        vec![]
    } else {
        match ctx.cpolys(gens, &ring) {
            Ok(g) => g,
            Err(e) => return error(cmd, e),
        }
    };
    let a = match ctx.point(at) {
        Ok(a) => a,
        Err(e) => return error(cmd, e),
    };
    match jet_space(&gens, &ring, &a, order) {
        Ok(j) => ok(
            cmd,
            json!({
                "dim": j.dim(),
                "operators": j.operators,
                "basis": j.basis.iter().map(|v| vector_json(v)).collect::<Vec<_>>(),
            }),
        ),
        Err(e) => error(cmd, e),
    }
}

fn cmd_jet_sep(ctx: &Ctx, x: &str, y: &str, at: &str, max_order: u32) -> Outcome {
    let cmd = "jet-sep";
    let ring = ctx.context().poly_ring();
    let x_gens = match ctx.cpolys(x, &ring) {
        Ok(g) => g,
        Err(e) => return error(cmd, e),
    };
    let y_gens = match ctx.cpolys(y, &ring) {
        Ok(g) => g,
        Err(e) => return error(cmd, e),
    };
    let a = match ctx.point(at) {
        Ok(a) => a,
        Err(e) => return error(cmd, e),
    };
    match jet_separate(&x_gens, &y_gens, &ring, &a, max_order) {
        Ok(JetSeparation::SeparatedAt(r)) => {
            ok(cmd, json!({ "answer": "separated_at", "order": r }))
        }
        Ok(JetSeparation::EqualUpTo(r)) => ok(cmd, json!({ "answer": "equal_up_to", "order": r })),
        Err(e) => error(cmd, e),
    }
}

fn cmd_dsmod_check(ctx: &Ctx, a: &[String], b: &str) -> Outcome {
    let cmd = "dsmod-check";
    let module = match ctx.module(a, b) {
        Ok(m) => m,
        Err(e) => return error(cmd, e),
    };
    report_outcome(cmd, &module.check_commutation())
}

fn cmd_dsmod_dual(ctx: &Ctx, a: &[String]) -> Outcome {
    let cmd = "dsmod-dual";
    let mats: Result<Vec<Matrix>, String> = a.iter().map(|s| ctx.matrix(s)).collect();
    match mats {
        Ok(mats) => {
            let duals = dual_matrices(&mats);
            ok(
                cmd,
                json!({ "duals": duals.iter().map(matrix_json).collect::<Vec<_>>() }),
            )
        }
        Err(e) => error(cmd, e),
    }
}

fn cmd_dsmod_gauge(ctx: &Ctx, a: &[String], b: &str, p: &str) -> Outcome {
    let cmd = "dsmod-gauge";
    let module = match ctx.module(a, b) {
        Ok(m) => m,
        Err(e) => return error(cmd, e),
    };
    let p_mat = match ctx.matrix(p) {
        Ok(m) => m,
        Err(e) => return error(cmd, e),
    };
    match gauge_transform(&module, &p_mat) {
        Ok(gauged) => ok(
            cmd,
            json!({
                "a": gauged.a_matrices().iter().map(matrix_json).collect::<Vec<_>>(),
                "b": matrix_json(gauged.b_matrix()),
                "commutation": report_json(&gauged.check_commutation()),
            }),
        ),
        Err(e) => error(cmd, e),
    }
}

fn cmd_dsmod_sharp(
    ctx: &Ctx,
    a: &[String],
    b: &str,
    matrix: Option<&str>,
    candidates: Option<&str>,
) -> Outcome {
    let cmd = "dsmod-sharp";
    let module = match ctx.module(a, b) {
        Ok(m) => m,
        Err(e) => return error(cmd, e),
    };
    if let Some(mtext) = matrix {
        let n = match ctx.matrix(mtext) {
            Ok(m) => m,
            Err(e) => return error(cmd, e),
        };
        return ok(cmd, json!({ "answer": sharp_verify(&module, &n) }));
    }
    if let Some(ctext) = candidates {
        let resolved = match ctx.session.resolve(ctext) {
            Ok(r) => r,
            Err(e) => return error(cmd, e),
        };
        let raw: Vec<Vec<String>> = match serde_json::from_str(resolved) {
            Ok(v) => v,
            Err(e) => return error(cmd, format!("candidates must be a JSON array of vectors: {e}")),
        };
        let mut vectors = Vec::new();
        for row in &raw {
            let mut v = Vec::new();
            for s in row {
                match ctx.context().parse_scalar(s) {
                    Ok(e) => v.push(e),
                    Err(e) => return error(cmd, e),
                }
            }
            vectors.push(v);
        }
        return match sharp_jet_space(&module, Some(&vectors)) {
            Ok(s) => ok(cmd, sharp_json(&s)),
            Err(e) => error(cmd, e),
        };
    }
    match sharp_solve_constant(&module) {
        Ok(s) => ok(cmd, sharp_json(&s)),
        Err(dsmod::DsmodError::NotConstant) => unknown(
            cmd,
            json!({
                "answer": "unsupported",
                "note": "non-constant module: supply --candidates to verify, or --matrix for a fundamental matrix",
            }),
        ),
        Err(e) => error(cmd, e),
    }
}

fn cmd_jet_module(
    ctx: &Ctx,
    gens: &str,
    sections: &str,
    point: &str,
    phi: &str,
    order: u32,
) -> Outcome {
    let cmd = "jet-module";
    let (variety, _) = match ctx.dvariety(gens, sections) {
        Ok(v) => v,
        Err(e) => return error(cmd, e),
    };
    let a = match ctx.point(point) {
        Ok(a) => a,
        Err(e) => return error(cmd, e),
    };
    let ring = variety.ring().clone();
    let resolved = match ctx.session.resolve(phi) {
        Ok(r) => r,
        Err(e) => return error(cmd, e),
    };
    let phi: Result<Vec<CPoly>, String> = split_top_level(resolved, ',')
        .into_iter()
        .map(|piece| {
            let p = ctx
                .context()
                .parse_poly(piece.trim())
                .map_err(|e| e.to_string())?;
            diff_to_order_zero(&p, &ring).map_err(|e| e.to_string())
        })
        .collect();
    let phi = match phi {
        Ok(p) => p,
        Err(e) => return error(cmd, e),
    };
    match jet_module(&variety, &a, &phi, order, &ctx.budget) {
        Ok(jm) => {
            let sharp = if jm.module.is_constant() {
                sharp_solve_constant(&jm.module).ok().map(|s| sharp_json(&s))
            } else {
                None
            };
            let result = json!({
                "dim": jm.module.dim(),
                "a": jm.module.a_matrices().iter().map(matrix_json).collect::<Vec<_>>(),
                "b": matrix_json(jm.module.b_matrix()),
                "basis_monomials": jm.basis_monomials,
                "commutation": report_json(&jm.commutation),
                "sharp": sharp,
            });
            if jm.commutation.passed() {
                ok(cmd, result)
            } else {
                unknown(cmd, result)
            }
        }
        Err(e) => error(cmd, e),
    }
}
