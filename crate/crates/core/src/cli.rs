//! Command-line front end. Every subcommand calls one library operation and
//! prints either a plain-text table or JSON.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::ehw::{ehw_normalize, first_reduction_point, is_unitary_highest_weight, EhwProfile};
use crate::embeddings::{
    klingen_embedding_datum, principal_series_datum, siegel_degenerate_datum, CharacterDatum, InductionDatum,
};
use crate::error::{Error, Result};
use crate::fourier::{
    build_pd_grid, cusp_condition_check, filtration_index, is_cuspidal, pit_vanishes, rigidity_check, siegel_phi,
    slash_invariance_check, DegreeBounds, FourierExpansion, GridDeviation, PdGrid, RatMatrix,
};
use crate::lfactors::{
    format_rational, gk_value, parse_rational, rational_serde, xi, CharacterValue, LaurentPoly, RationalFunction,
    SatakeDatum, SatakeParam,
};
use crate::orbitclassify::{
    classify_levels, classify_levels_bounded, decomposition_report, decomposition_report_for_character,
    enumerate_reports, siegel_surjectivity_check, siegel_surjectivity_check_factored, Conclusion,
    DecompositionReport, OrbitClassification, SurjectivityTag, SurjectivityVerdict,
};
use crate::scalar::Scalar;
use crate::weights::{holomorphy_vanishing, is_integral, is_k_dominant, parity_class, VanishingVerdict, Weight};
use crate::weyl::{
    dominant_orbit_elements, infchar_canonical, infchar_equal, is_regular, is_sufficiently_regular,
    orbit_dichotomy_check, set_orbit_cap, InfChar,
};

pub const ORBIT_CAP_ENV: &str = "SYMPL_ORBIT_CAP";

#[derive(Parser, Debug)]
#[command(name = "sympl", version, about = "Exact weight, orbit, L-factor and Fourier computations for Sp(2n)")]
pub struct Cli {
    /// Print JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct WeightArg {
    /// Weight rows separated by ';', entries by ',', e.g. 5,3;5,4.
    #[arg(long, allow_hyphen_values = true)]
    pub weight: Weight,
}

#[derive(Args, Debug, Clone)]
pub struct SatakeArgs {
    /// Inner rank; uses symbolic parameters b1..bm.
    #[arg(long, conflicts_with = "satake")]
    pub m: Option<usize>,
    /// Comma-separated Satake parameters (symbols or rationals).
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    pub satake: Option<Vec<SatakeParam>>,
    /// Character value at the uniformizer: a symbol or +-1.
    #[arg(long = "char", allow_hyphen_values = true)]
    pub character: Option<CharacterValue>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Dominant weights in the dot orbit.
    Orbit(WeightArg),
    /// Canonical infinitesimal character, optionally compared with another weight.
    Infchar {
        #[command(flatten)]
        weight: WeightArg,
        #[arg(long, allow_hyphen_values = true)]
        with: Option<Weight>,
    },
    /// Dominance, integrality, parity and the holomorphy vanishing verdict.
    Dominant(WeightArg),
    /// Sufficient regularity relative to a parabolic index.
    Suffreg {
        #[command(flatten)]
        weight: WeightArg,
        #[arg(long)]
        i: usize,
    },
    /// Klingen embedding datum of a single-place weight.
    Embed {
        #[command(flatten)]
        weight: WeightArg,
        #[arg(long)]
        i: usize,
    },
    /// Principal series character of a single-place weight.
    Principal(WeightArg),
    /// Siegel degenerate principal series character of a single-place weight.
    Degenerate(WeightArg),
    /// First reduction point of a normalized weight (bottom entry = n).
    ReductionPoint(WeightArg),
    /// Unitarity of the highest weight module.
    Unitary(WeightArg),
    /// Infinitesimal-character classes of the levels 0..upper.
    ClassifyLevels {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: usize,
        /// Inner weight, comma separated; empty when i = n.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        inner: String,
        /// Explicit upper end of the level range (required when i = n).
        #[arg(long)]
        upper: Option<i64>,
    },
    /// Structured decomposition report; all parabolic indices if --i is absent.
    Report {
        #[command(flatten)]
        weight: WeightArg,
        #[arg(long)]
        i: Option<usize>,
        /// Archimedean sign of the Hecke character, 1 or -1.
        #[arg(long = "char", allow_hyphen_values = true, requires = "i")]
        sign: Option<i8>,
    },
    /// Whether the global Siegel operator is covered by the surjectivity theorem.
    Surjectivity {
        #[command(flatten)]
        weight: WeightArg,
        #[arg(long, conflicts_with = "primes", required_unless_present = "primes")]
        level: Option<u64>,
        /// The level as a list of primes.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
    },
    /// The normalizing factor xi_i(s + shift).
    Xi {
        #[arg(long)]
        i: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        shift: Scalar,
        #[command(flatten)]
        satake: SatakeArgs,
    },
    /// Gindikin-Karpelevich value for the Weyl element w_j.
    Gk {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[command(flatten)]
        satake: SatakeArgs,
    },
    /// Evaluate a rational function (or a GK value) at a rational point.
    Eval {
        /// Rational function in display form, e.g. "(1 - T) / (1 - Q^-2*T)".
        #[arg(long, allow_hyphen_values = true)]
        expr: Option<String>,
        #[arg(long, required_unless_present = "expr")]
        i: Option<usize>,
        #[arg(long, required_unless_present = "expr")]
        j: Option<usize>,
        #[command(flatten)]
        satake: SatakeArgs,
        /// Assignment such as X=1,Q=2,T=1/16.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Support properties of a Fourier expansion file ('-' reads stdin).
    Fourier {
        #[arg(long)]
        file: String,
        /// Unimodular matrix for the slash invariance check, rows separated by ';'.
        #[arg(long, allow_hyphen_values = true)]
        matrix: Option<RatMatrix>,
        /// Weight for the rigidity check (needs --j).
        #[arg(long, allow_hyphen_values = true, requires = "j")]
        weight: Option<Weight>,
        #[arg(long, requires = "weight")]
        j: Option<usize>,
    },
    /// Apply the Siegel operator to a Fourier expansion file.
    Phi {
        #[arg(long)]
        file: String,
    },
    /// Positive definite interpolation grid.
    Grid(GridArgs),
    /// Polynomial identity test on the grid; variables are x<i>_<j>_<k>.
    Pit {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, allow_hyphen_values = true)]
        poly: LaurentPoly,
    },
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// One bound for every entry, or d upper triangles back to back.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub bounds: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitOutput {
    pub dominant: Vec<Weight>,
    pub regular: bool,
    /// Absent when the dichotomy hypotheses fail.
    pub dichotomy: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfcharOutput {
    pub canonical: InfChar,
    pub regular: bool,
    pub equal: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSummary {
    pub k_dominant: bool,
    pub integral: bool,
    pub parity_class: Option<i8>,
    pub vanishing: VanishingVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitaryOutput {
    pub profile: EhwProfile,
    pub reduction_point: Scalar,
    pub unitary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactValue {
    #[serde(with = "rational_serde")]
    pub value: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourierSummary {
    pub n: usize,
    pub k: i64,
    pub terms: usize,
    pub cusp_condition: bool,
    pub cuspidal: bool,
    pub filtration_index: usize,
    pub slash_invariant: Option<bool>,
    pub rigidity: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PitOutput {
    pub vanishes: bool,
    pub points: usize,
    pub deviations: Vec<GridDeviation>,
}

/// Typed result of one command.
#[derive(Clone, Debug, PartialEq)]
pub enum Output {
    Orbit(OrbitOutput),
    Infchar(InfcharOutput),
    Dominant(WeightSummary),
    Flag(bool),
    Embed(InductionDatum),
    Principal(Vec<CharacterDatum>),
    Degenerate(CharacterDatum),
    Scalar(Scalar),
    Unitary(UnitaryOutput),
    Classes(OrbitClassification),
    Reports(Vec<DecompositionReport>),
    Surjectivity(SurjectivityVerdict),
    Function(RationalFunction),
    Exact(ExactValue),
    Fourier(FourierSummary),
    Expansion(FourierExpansion),
    Grid(PdGrid),
    Pit(PitOutput),
}

macro_rules! each_output {
    ($self:expr, $v:ident => $body:expr) => {
        match $self {
            Output::Orbit($v) => $body,
            Output::Infchar($v) => $body,
            Output::Dominant($v) => $body,
            Output::Flag($v) => $body,
            Output::Embed($v) => $body,
            Output::Principal($v) => $body,
            Output::Degenerate($v) => $body,
            Output::Scalar($v) => $body,
            Output::Unitary($v) => $body,
            Output::Classes($v) => $body,
            Output::Reports($v) => $body,
            Output::Surjectivity($v) => $body,
            Output::Function($v) => $body,
            Output::Exact($v) => $body,
            Output::Fourier($v) => $body,
            Output::Expansion($v) => $body,
            Output::Grid($v) => $body,
            Output::Pit($v) => $body,
        }
    };
}

impl Output {
    pub fn to_json(&self) -> String {
        each_output!(self, v => serde_json::to_string_pretty(v)).expect("outputs serialize")
    }

    /// Parses `json` as a value of the same kind as `self`.
    pub fn reparse(&self, json: &str) -> Result<Output> {
        fn de<T: serde::de::DeserializeOwned>(json: &str) -> Result<T> {
            serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
        }
        Ok(match self {
            Output::Orbit(_) => Output::Orbit(de(json)?),
            Output::Infchar(_) => Output::Infchar(de(json)?),
            Output::Dominant(_) => Output::Dominant(de(json)?),
            Output::Flag(_) => Output::Flag(de(json)?),
            Output::Embed(_) => Output::Embed(de(json)?),
            Output::Principal(_) => Output::Principal(de(json)?),
            Output::Degenerate(_) => Output::Degenerate(de(json)?),
            Output::Scalar(_) => Output::Scalar(de(json)?),
            Output::Unitary(_) => Output::Unitary(de(json)?),
            Output::Classes(_) => Output::Classes(de(json)?),
            Output::Reports(_) => Output::Reports(de(json)?),
            Output::Surjectivity(_) => Output::Surjectivity(de(json)?),
            Output::Function(_) => Output::Function(de(json)?),
            Output::Exact(_) => Output::Exact(de(json)?),
            Output::Fourier(_) => Output::Fourier(de(json)?),
            Output::Expansion(_) => Output::Expansion(de(json)?),
            Output::Grid(_) => Output::Grid(de(json)?),
            Output::Pit(_) => Output::Pit(de(json)?),
        })
    }

    pub fn table(&self) -> String {
        let mut t = Table::default();
        match self {
            Output::Orbit(o) => {
                t.row("dominant", braces(o.dominant.iter().map(|w| format!("({w})"))));
                t.row("regular", o.regular);
                t.row("dichotomy", opt(&o.dichotomy));
            }
            Output::Infchar(o) => {
                let rows: Vec<String> = o.canonical.rows().iter().map(|r| join(r, ",")).collect();
                t.row("canonical", rows.join(";"));
                t.row("regular", o.regular);
                if let Some(eq) = o.equal {
                    t.row("equal", eq);
                }
            }
            Output::Dominant(o) => {
                t.row("k-dominant", o.k_dominant);
                t.row("integral", o.integral);
                t.row("parity class", opt(&o.parity_class));
                t.row("vanishing", format!("{:?}", o.vanishing));
            }
            Output::Flag(b) => return format!("{b}\n"),
            Output::Embed(e) => {
                t.row("n", e.n);
                t.row("i", e.i);
                t.row("character", character(&e.character));
                t.row("inner weight", join(&e.inner_weight, ","));
            }
            Output::Principal(cs) => {
                for (k, c) in cs.iter().enumerate() {
                    t.row(&format!("{}", k + 1), character(c));
                }
            }
            Output::Degenerate(c) => return format!("{}\n", character(c)),
            Output::Scalar(s) => return format!("{s}\n"),
            Output::Unitary(u) => {
                t.row("base", join(&u.profile.base, ","));
                t.row("p", u.profile.p);
                t.row("q", u.profile.q);
                t.row("r", u.profile.r);
                t.row("reduction point", u.reduction_point);
                t.row("unitary", u.unitary);
            }
            Output::Classes(c) => {
                t.row("n", c.n);
                t.row("i", c.i);
                t.row("X", format!("{{0..{}}}", c.upper));
                t.row("Y", format!("{{{}}}", join(&c.y, ",")));
                t.row("classes", braces(c.classes.iter().map(|cl| format!("{{{}}}", join(cl, ",")))));
                t.row("bijective", c.bijective);
            }
            Output::Reports(rs) => {
                let blocks: Vec<String> = rs.iter().map(report_table).collect();
                return blocks.join("\n");
            }
            Output::Surjectivity(v) => {
                t.row("verdict", surjectivity_tag(&v.tag));
                for c in &v.failed_conditions {
                    t.row("failed", c);
                }
            }
            Output::Function(f) => return format!("{f}\n"),
            Output::Exact(e) => return format!("{}\n", format_rational(&e.value)),
            Output::Fourier(f) => {
                t.row("n", f.n);
                t.row("k", f.k);
                t.row("terms", f.terms);
                t.row("cusp condition", f.cusp_condition);
                t.row("cuspidal", f.cuspidal);
                t.row("filtration index", f.filtration_index);
                if let Some(s) = f.slash_invariant {
                    t.row("slash invariant", s);
                }
                if let Some(r) = f.rigidity {
                    t.row("rigidity", r);
                }
            }
            Output::Expansion(f) => return f.to_string(),
            Output::Grid(g) => {
                grid_rows(&mut t, g);
                t.row("points", g.num_points());
            }
            Output::Pit(p) => {
                t.row("vanishes", p.vanishes);
                t.row("points", p.points);
                deviation_rows(&mut t, &p.deviations);
            }
        }
        t.finish()
    }
}

#[derive(Default)]
struct Table {
    rows: Vec<(String, String)>,
}

impl Table {
    fn row(&mut self, key: &str, value: impl ToString) {
        self.rows.push((key.to_string(), value.to_string()));
    }

    fn finish(&self) -> String {
        let width = self.rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut s = String::new();
        for (k, v) in &self.rows {
            let _ = writeln!(s, "{:width$}  {v}", format!("{k}:"), width = width + 1);
        }
        s
    }
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn braces(items: impl Iterator<Item = String>) -> String {
    let v: Vec<String> = items.collect();
    if v.is_empty() {
        "(none)".into()
    } else {
        v.join(" ")
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".into(), T::to_string)
}

fn character(c: &CharacterDatum) -> String {
    format!("sgn^{} |.|^{}", c.parity, c.exponent)
}

fn surjectivity_tag(t: &SurjectivityTag) -> &'static str {
    match t {
        SurjectivityTag::SurjectiveByTheorem => "SurjectiveByTheorem",
        SurjectivityTag::NotCovered => "NotCovered",
    }
}

fn report_table(r: &DecompositionReport) -> String {
    let mut t = Table::default();
    t.row("weight", &r.weight);
    t.row("n", r.n);
    t.row("d", r.d);
    t.row("i", r.i);
    for h in &r.hypotheses {
        t.row(if h.pass { "pass" } else { "FAIL" }, &h.name);
    }
    for a in &r.assumptions {
        t.row("assumes", a);
    }
    t.row("parity class", opt(&r.parity_class));
    t.row("exponent", opt(&r.exponent));
    let inner: Vec<String> = r.inner_weights.iter().map(|w| join(w, ",")).collect();
    t.row("inner weights", if inner.is_empty() { "-".into() } else { inner.join(";") });
    t.row("character sign", opt(&r.character_sign));
    let conclusion = match r.conclusion {
        Conclusion::IsotypicDescription => "IsotypicDescription",
        Conclusion::VanishesWrongParity => "VanishesWrongParity",
        Conclusion::HypothesesFail => "HypothesesFail",
    };
    t.row("conclusion", conclusion);
    t.finish()
}

fn grid_rows(t: &mut Table, g: &PdGrid) {
    t.row("n", g.n());
    t.row("d", g.d());
    t.row("offsets", join(g.offsets(), ","));
    deviation_rows(t, g.deviations());
}

fn deviation_rows(t: &mut Table, deviations: &[GridDeviation]) {
    for dev in deviations {
        t.row(
            "deviation",
            format!(
                "place {}: offset {} -> {} (non-PD point {})",
                dev.place + 1,
                dev.prescribed_offset,
                dev.inflated_offset,
                dev.witness.bracketed()
            ),
        );
    }
}

fn single_row(w: &Weight) -> Result<&[Scalar]> {
    if w.d() != 1 {
        return Err(Error::InvalidArgument(format!("expected a single-place weight, got {} places", w.d())));
    }
    Ok(w.row(0))
}

fn parse_row(s: &str) -> Result<Vec<Scalar>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(str::parse).collect()
}

fn parse_assignment(s: &str) -> Result<BTreeMap<String, BigRational>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|pair| {
            let (k, v) = pair.split_once('=').ok_or_else(|| Error::Parse(format!("expected name=value, got '{pair}'")))?;
            Ok((k.trim().to_string(), parse_rational(v)?))
        })
        .collect()
}

fn satake_datum(args: &SatakeArgs) -> Result<SatakeDatum> {
    let character = args.character.clone().unwrap_or(CharacterValue::Symbol(crate::lfactors::GEN_X.into()));
    match (&args.m, &args.satake) {
        (_, Some(params)) => SatakeDatum::new(params.clone(), character),
        (m, None) => {
            let mut d = SatakeDatum::symbolic(m.unwrap_or(0));
            d.character = character;
            Ok(d)
        }
    }
}

fn read_source(path: &str) -> Result<String> {
    let mut s = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    res.map_err(|e| Error::InvalidArgument(format!("cannot read '{path}': {e}")))?;
    Ok(s)
}

/// Runs one command.
pub fn execute(command: &Command) -> Result<Output> {
    Ok(match command {
        Command::Orbit(w) => {
            let w = &w.weight;
            Output::Orbit(OrbitOutput {
                dominant: dominant_orbit_elements(w)?,
                regular: is_regular(w),
                dichotomy: match orbit_dichotomy_check(w) {
                    Ok(b) => Some(b),
                    Err(Error::HypothesisViolated(_)) => None,
                    Err(e) => return Err(e),
                },
            })
        }
        Command::Infchar { weight, with } => {
            let w = &weight.weight;
            Output::Infchar(InfcharOutput {
                canonical: infchar_canonical(w),
                regular: is_regular(w),
                equal: with.as_ref().map(|other| infchar_equal(w, other)).transpose()?,
            })
        }
        Command::Dominant(w) => {
            let w = &w.weight;
            Output::Dominant(WeightSummary {
                k_dominant: is_k_dominant(w),
                integral: is_integral(w),
                parity_class: parity_class(w).ok(),
                vanishing: holomorphy_vanishing(w),
            })
        }
        Command::Suffreg { weight, i } => Output::Flag(is_sufficiently_regular(&weight.weight, *i)?),
        Command::Embed { weight, i } => Output::Embed(klingen_embedding_datum(single_row(&weight.weight)?, *i)?),
        Command::Principal(w) => Output::Principal(principal_series_datum(single_row(&w.weight)?)?),
        Command::Degenerate(w) => Output::Degenerate(siegel_degenerate_datum(single_row(&w.weight)?)?),
        Command::ReductionPoint(w) => Output::Scalar(first_reduction_point(single_row(&w.weight)?)?),
        Command::Unitary(w) => {
            let row = single_row(&w.weight)?;
            let profile = ehw_normalize(row)?;
            let reduction_point = first_reduction_point(&profile.base)?;
            Output::Unitary(UnitaryOutput { unitary: is_unitary_highest_weight(row)?, profile, reduction_point })
        }
        Command::ClassifyLevels { n, i, inner, upper } => {
            let inner = parse_row(inner)?;
            Output::Classes(match upper {
                Some(u) => classify_levels_bounded(&inner, *n, *i, *u)?,
                None if *i == *n => {
                    return Err(Error::InvalidArgument("i = n needs an explicit --upper".into()))
                }
                None => classify_levels(&inner, *n, *i)?,
            })
        }
        Command::Report { weight, i, sign } => {
            let w = &weight.weight;
            Output::Reports(match (i, sign) {
                (None, _) => enumerate_reports(w),
                (Some(i), None) => vec![decomposition_report(w, *i)],
                (Some(i), Some(s)) => {
                    if *s != 1 && *s != -1 {
                        return Err(Error::InvalidArgument(format!("character sign {s} is not 1 or -1")));
                    }
                    vec![decomposition_report_for_character(w, *i, *s)]
                }
            })
        }
        Command::Surjectivity { weight, level, primes } => Output::Surjectivity(match (level, primes) {
            (Some(n), _) => siegel_surjectivity_check(&weight.weight, *n)?,
            (None, Some(p)) => siegel_surjectivity_check_factored(&weight.weight, p)?,
            (None, None) => return Err(Error::InvalidArgument("give --level or --primes".into())),
        }),
        Command::Xi { i, shift, satake } => Output::Function(xi(*i, &satake_datum(satake)?, *shift)),
        Command::Gk { i, j, satake } => Output::Function(gk_value(*i, *j, &satake_datum(satake)?)?),
        Command::Eval { expr, i, j, satake, at } => {
            let f = match (expr, i, j) {
                (Some(e), _, _) => e.parse::<RationalFunction>()?,
                (None, Some(i), Some(j)) => gk_value(*i, *j, &satake_datum(satake)?)?,
                _ => return Err(Error::InvalidArgument("give --expr or both --i and --j".into())),
            };
            Output::Exact(ExactValue { value: f.evaluate(&parse_assignment(at)?)? })
        }
        Command::Fourier { file, matrix, weight, j } => {
            let f: FourierExpansion = read_source(file)?.parse()?;
            Output::Fourier(FourierSummary {
                n: f.n(),
                k: f.k(),
                terms: f.support().count(),
                cusp_condition: cusp_condition_check(&f),
                cuspidal: is_cuspidal(&f),
                filtration_index: filtration_index(&f),
                slash_invariant: matrix.as_ref().map(|a| slash_invariance_check(&f, a)).transpose()?,
                rigidity: match (weight, j) {
                    (Some(w), Some(j)) => Some(rigidity_check(w, &f, *j)?),
                    _ => None,
                },
            })
        }
        Command::Phi { file } => Output::Expansion(siegel_phi(&read_source(file)?.parse()?)?),
        Command::Grid(g) => Output::Grid(build_pd_grid(&DegreeBounds::from_flat(g.n, g.d, &g.bounds)?)?),
        Command::Pit { grid, poly } => {
            let g = build_pd_grid(&DegreeBounds::from_flat(grid.n, grid.d, &grid.bounds)?)?;
            Output::Pit(PitOutput {
                vanishes: pit_vanishes(poly, &g)?,
                points: g.num_points(),
                deviations: g.deviations().to_vec(),
            })
        }
    })
}

/// Parses `args` (including the program name), runs the command and writes
/// the result. Returns the process exit code: 0 success, 1 domain error,
/// 2 usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    if let Ok(cap) = std::env::var(ORBIT_CAP_ENV) {
        match cap.trim().parse::<usize>() {
            Ok(cap) => set_orbit_cap(cap),
            Err(_) => {
                let _ = writeln!(err, "error: {ORBIT_CAP_ENV} must be a non-negative integer, got '{cap}'");
                return 2;
            }
        }
    }
    match execute(&cli.command) {
        Ok(output) => {
            let text = if cli.json { output.to_json() + "\n" } else { output.table() };
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", e.name());
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("sympl").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn classify_levels_table() {
        let (code, out, _) = run_str(&["classify-levels", "--n", "2", "--i", "1", "--inner", "5"]);
        assert_eq!(code, 0);
        assert!(out.contains("{0,4} {1,3} {2} {5}"), "{out}");
        assert!(out.contains("bijective:  true"), "{out}");
    }

    #[test]
    fn reduction_point_prints_scalar() {
        assert_eq!(run_str(&["reduction-point", "--weight", "4,3,3"]), (0, "2\n".into(), String::new()));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_str(&["reduction-point"]).0, 2);
        let (code, _, err) = run_str(&["reduction-point", "--weight", "4,x"]);
        assert_eq!(code, 2);
        assert!(err.contains("--weight"), "{err}");
        let (code, _, err) = run_str(&["reduction-point", "--weight", "4,4"]);
        assert_eq!(code, 1);
        assert!(err.contains("BottomEntryNotRank"), "{err}");
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn negative_weights_parse() {
        let (code, out, _) = run_str(&["unitary", "--weight", "-1,-1"]);
        assert_eq!(code, 0);
        assert!(out.contains("unitary:          false"), "{out}");
    }
}
