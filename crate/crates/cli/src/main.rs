mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sl3_core::betti::{self, character_map, invert_character, normalize_pair, RepPair};
use sl3_core::cone::{self, ConeGeometry};
use sl3_core::higgs::{self, HiggsFamily};
use sl3_core::integral::{self, DiophantineTriple, IntegralWitness, DEFAULT_INDEX_CAP};
use sl3_core::parse::{parse_gaussian, parse_point, parse_range, parse_rationals, parse_real_matrix, parse_sl3};
use sl3_core::surface::{self, classify_component, lawton_eval, on_surface, psi, solve_z};
use sl3_core::tzitzeica::{self, Background, Boundary, QField, TzitzeicaProblem};
use sl3_core::verify;
use sl3_core::{Error, ExactMatrix3, GaussianRational, Mat2, ParamPoint, Rational, SL3Matrix};

use report::{envelope, write_csv, Certificate, Output};

#[derive(Parser)]
#[command(name = "sl3", version, about = "Exact and numerical checks on the SL(3) character variety of the thrice-punctured sphere")]
struct Cli {
    /// Worker threads for parallel sweeps (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for the randomized fallback in the Higgs real criterion and for verify-all sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit a CSV table instead of JSON where the command supports one.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// The cubic surface P(x, y, z) = 0 and its parametrization.
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// Representations of the free group on two generators.
    #[command(subcommand)]
    Rep(RepCmd),
    /// Integral representations and integer points.
    #[command(subcommand)]
    Integral(IntegralCmd),
    /// Parabolic Higgs fields with nilpotent residues.
    #[command(subcommand)]
    Higgs(HiggsCmd),
    /// Tzitzeica equation on a disk.
    #[command(subcommand)]
    Tzitzeica(TzitzeicaCmd),
    /// Affine cone potential and the Monge-Ampere identity.
    #[command(subcommand)]
    Cone(ConeCmd),
    /// Run the full acceptance table.
    VerifyAll,
}

#[derive(Subcommand)]
enum SurfaceCmd {
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    Param {
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    SolveZ {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

#[derive(Args)]
struct PairArgs {
    /// Nine rationals, row-major.
    #[arg(long, allow_hyphen_values = true)]
    a1: String,
    #[arg(long, allow_hyphen_values = true)]
    a2: String,
}

#[derive(Subcommand)]
enum RepCmd {
    Char(PairArgs),
    Invert {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    Normalize(PairArgs),
    Uniformization,
    Sym2 {
        /// Four rationals a,b,c,d of [[a,b],[c,d]].
        #[arg(long, allow_hyphen_values = true)]
        m: String,
    },
}

#[derive(Subcommand)]
enum IntegralCmd {
    C1 {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    C2 {
        /// Recursion index.
        #[arg(long, conflicts_with = "triple", required_unless_present = "triple")]
        n: Option<u64>,
        #[arg(long)]
        triple: Option<String>,
        #[arg(long, default_value_t = DEFAULT_INDEX_CAP)]
        cap: u64,
    },
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// cyclicQ, genI, genII, genIII or genIV.
    #[arg(long = "type", value_parser = parse_kind)]
    kind: FamilyKind,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
}

#[derive(Clone, Copy)]
enum FamilyKind {
    CyclicQ,
    GenI,
    GenII,
    GenIII,
    GenIV,
}

fn parse_kind(s: &str) -> Result<FamilyKind, String> {
    let k: String = s.chars().filter(|c| c.is_alphanumeric()).collect::<String>().to_lowercase();
    Ok(match k.as_str() {
        "cyclicq" | "cyclic" => FamilyKind::CyclicQ,
        "geni" | "gen1" => FamilyKind::GenI,
        "genii" | "gen2" => FamilyKind::GenII,
        "geniii" | "gen3" => FamilyKind::GenIII,
        "geniv" | "gen4" => FamilyKind::GenIV,
        _ => return Err(format!("unknown family {s:?}; expected cyclicQ, genI, genII, genIII or genIV")),
    })
}

#[derive(Subcommand)]
enum HiggsCmd {
    Family(FamilyArgs),
    RealCheck(FamilyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BackgroundArg {
    Flat,
    Hyperbolic,
}

#[derive(Subcommand)]
enum TzitzeicaCmd {
    Solve {
        #[arg(long, value_enum, default_value = "flat")]
        background: BackgroundArg,
        /// Constant |q|^2 of the cubic differential coefficient.
        #[arg(long = "q-sq", default_value_t = 0.0625)]
        q_sq: f64,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 65)]
        grid: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long = "max-iters", default_value_t = 50)]
        max_iters: usize,
        /// Constant Dirichlet value of u on the circle.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        boundary: f64,
    },
}

#[derive(Subcommand)]
enum ConeCmd {
    Verify {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long = "H", default_value_t = 1, allow_hyphen_values = true)]
        h: i8,
        #[arg(long = "r-samples", default_value_t = 100)]
        r_samples: usize,
    },
    Potential {
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long = "H", default_value_t = 1, allow_hyphen_values = true)]
        h: i8,
    },
    Semiflat {
        /// Symmetric positive definite matrix, rows separated by ';'.
        #[arg(long)]
        base: String,
    },
}

fn q(s: &str) -> Result<Rational, Error> {
    Ok(s.trim().parse::<Rational>()?)
}

fn fmt_matrix(m: &ExactMatrix3) -> String {
    (0..3).map(|i| (0..3).map(|j| m.get(i, j).to_string()).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join("; ")
}

fn pair(a: &PairArgs) -> Result<RepPair, Error> {
    RepPair::new(parse_sl3(&a.a1)?, parse_sl3(&a.a2)?)
}

fn rep_certificates(rep: &RepPair) -> Vec<Certificate> {
    let chi = character_map(rep);
    let idx: Vec<Option<u8>> = [rep.a1().clone(), rep.a2().clone(), rep.a3()].iter().map(|g| g.unipotency_index().ok()).collect();
    vec![
        Certificate::with_value("character_on_surface", on_surface(&chi), lawton_eval(&chi)),
        Certificate::with_value("unipotent_generators", idx.iter().all(Option::is_some), idx),
        Certificate::check("det_one", [rep.a1().clone(), rep.a2().clone(), rep.a3()].iter().all(|g| g.matrix().det() == 1)),
    ]
}

fn surface_cmd(c: &SurfaceCmd) -> Result<Output, Error> {
    Ok(match c {
        SurfaceCmd::Eval { point } => {
            let p = parse_point(point)?;
            let v = lawton_eval(&p);
            let zero = v == 0;
            Output::json(
                json!({ "point": p }),
                json!({ "P": v, "on_surface": zero }),
                vec![Certificate::with_value("exact_evaluation", true, &v)],
            )
        }
        SurfaceCmd::Param { s, t } => {
            let pp = ParamPoint::new(q(s)?, q(t)?)?;
            let chi = psi(&pp);
            let back = surface::psi_preimage(&chi);
            Output::json(
                json!({ "s": pp.s(), "t": pp.t() }),
                json!({ "point": chi }),
                vec![
                    Certificate::check("on_surface", on_surface(&chi)),
                    Certificate::check("preimage_recovers_parameter", back.as_ref() == Some(&pp)),
                ],
            )
        }
        SurfaceCmd::SolveZ { x, y } => {
            let (x, y) = (q(x)?, q(y)?);
            let roots = solve_z(&x, &y);
            let certs = roots
                .iter()
                .map(|z| {
                    Certificate::with_value(
                        "root_on_surface",
                        on_surface(&sl3_core::CharacterPoint::new(x.clone(), y.clone(), z.clone())),
                        z,
                    )
                })
                .collect::<Vec<_>>();
            let certs = if certs.is_empty() { vec![Certificate::check("no_rational_roots", true)] } else { certs };
            Output::json(json!({ "x": x, "y": y }), json!({ "roots": roots }), certs)
        }
        SurfaceCmd::Classify { point } => {
            let p = parse_point(point)?;
            if !on_surface(&p) {
                return Err(Error::OffSurface(lawton_eval(&p).to_string()));
            }
            let comp = classify_component(&p)?;
            Output::json(json!({ "point": p }), json!({ "component": comp.to_string() }), vec![Certificate::check("on_surface", true)])
        }
    })
}

fn rep_cmd(c: &RepCmd) -> Result<Output, Error> {
    Ok(match c {
        RepCmd::Char(a) => {
            let rep = pair(a)?;
            let chi = character_map(&rep);
            Output::json(json!(rep), json!({ "character": chi }), rep_certificates(&rep))
        }
        RepCmd::Invert { point } => {
            let p = parse_point(point)?;
            let rep = invert_character(&p)?;
            let mut certs = rep_certificates(&rep);
            certs.push(Certificate::check("character_matches", character_map(&rep) == p));
            Output::json(json!({ "point": p }), json!({ "rep": rep, "a3": rep.a3() }), certs)
        }
        RepCmd::Normalize(a) => {
            let rep = pair(a)?;
            let nf = normalize_pair(&rep)?;
            let back = rep.conjugate_by(&nf.conjugator)?;
            let certs = vec![
                Certificate::check("conjugation_reproduces_normal_form", back == nf.normalized),
                Certificate::check("character_preserved", character_map(&nf.normalized) == character_map(&rep)),
            ];
            Output::json(json!(rep), json!(nf), certs)
        }
        RepCmd::Uniformization => {
            let rep = betti::uniformization_rep();
            let g3 = betti::uniformization_gamma3();
            let closes = g3.multiply(rep.a2()).multiply(rep.a1()) == SL3Matrix::identity();
            let (x, y) = betti::level_two_generators();
            let from_sym2 = RepPair::new(betti::sym_square(&x)?, betti::sym_square(&y)?)?;
            let mut certs = rep_certificates(&rep);
            certs.push(Certificate::check("gamma3_gamma2_gamma1_is_identity", closes));
            certs.push(Certificate::check("sym2_level_two_same_character", character_map(&from_sym2) == character_map(&rep)));
            Output::json(json!({}), json!({ "rep": rep, "gamma3": g3, "character": character_map(&rep) }), certs)
        }
        RepCmd::Sym2 { m } => {
            let v = parse_rationals(m, 4)?;
            let mat = Mat2::new([[v[0].clone(), v[1].clone()], [v[2].clone(), v[3].clone()]]);
            let s = betti::sym_square(&mat)?;
            Output::json(json!({ "m": v }), json!({ "sym2": s }), vec![Certificate::check("det_one", s.matrix().det() == 1)])
        }
    })
}

fn witness_certificates(w: &IntegralWitness) -> Vec<Certificate> {
    let mut certs = rep_certificates(&w.rep);
    certs.push(Certificate::check("integral_matrices", w.rep.is_integral()));
    certs.push(Certificate::check("character_is_psi_of_param", {
        ParamPoint::new(w.param.0.clone(), w.param.1.clone()).map(|p| psi(&p) == w.character).unwrap_or(false)
    }));
    certs.push(Certificate::with_value("component", true, w.component.to_string()));
    certs
}

const TABLE_HEADER: [&str; 8] = ["s", "t", "x", "y", "z", "gamma1", "gamma2", "component"];

fn witness_row(w: &IntegralWitness) -> Vec<String> {
    vec![
        w.param.0.to_string(),
        w.param.1.to_string(),
        w.character.x.to_string(),
        w.character.y.to_string(),
        w.character.z.to_string(),
        fmt_matrix(w.rep.a1().matrix()),
        fmt_matrix(w.rep.a2().matrix()),
        w.component.to_string(),
    ]
}

fn witness_output(w: IntegralWitness, input: Value, csv: bool) -> Output {
    if csv {
        let ok = witness_certificates(&w).iter().all(|c| c.passed);
        return Output::Csv { header: TABLE_HEADER.map(String::from).to_vec(), rows: vec![witness_row(&w)], ok };
    }
    let certs = witness_certificates(&w);
    Output::json(input, w, certs)
}

fn integral_cmd(c: &IntegralCmd, csv: bool) -> Result<Output, Error> {
    Ok(match c {
        IntegralCmd::C1 { n } => witness_output(integral::c1_family(&(*n).into())?, json!({ "n": n }), csv),
        IntegralCmd::C2 { n, triple, cap } => {
            let (t, input) = match (n, triple) {
                (Some(n), _) => (integral::hitchin_recursion_capped(*n, *cap)?, json!({ "n": n, "cap": cap })),
                (None, Some(s)) => {
                    let v = parse_rationals(s, 3)?;
                    let ints: Vec<_> = v
                        .iter()
                        .map(|r| r.to_integer().ok_or_else(|| Error::InvalidTriple(format!("{r} is not an integer"))))
                        .collect::<Result<_, _>>()?;
                    let t = DiophantineTriple::new(ints[0].clone(), ints[1].clone(), ints[2].clone())?;
                    let input = json!({ "triple": t });
                    (t, input)
                }
                (None, None) => unreachable!("clap requires one of --n, --triple"),
            };
            witness_output(integral::c2_rep(&t)?, input, csv)
        }
        IntegralCmd::Scan { x, y } => {
            let (xr, yr) = (parse_range(x)?, parse_range(y)?);
            let pts = integral::scan_integer_points(xr, yr);
            if csv {
                let rows = pts
                    .iter()
                    .map(|s| {
                        let (ps, pt) = match surface::psi_preimage(&s.point) {
                            Some(p) => (p.s().to_string(), p.t().to_string()),
                            None => (String::new(), String::new()),
                        };
                        vec![
                            ps,
                            pt,
                            s.point.x.to_string(),
                            s.point.y.to_string(),
                            s.point.z.to_string(),
                            String::new(),
                            String::new(),
                            s.component.to_string(),
                        ]
                    })
                    .collect();
                return Ok(Output::Csv { header: TABLE_HEADER.map(String::from).to_vec(), rows, ok: true });
            }
            let all_on = pts.iter().all(|s| on_surface(&s.point));
            Output::json(
                json!({ "x": [xr.0, xr.1], "y": [yr.0, yr.1] }),
                json!({ "count": pts.len(), "points": pts }),
                vec![Certificate::check("all_points_on_surface", all_on)],
            )
        }
    })
}

fn gaussian_arg(v: &Option<String>, name: &str) -> Result<GaussianRational, Error> {
    match v {
        Some(s) => Ok(parse_gaussian(s)?),
        None => Err(Error::Unsupported(format!("--{name} is required for this family"))),
    }
}

fn family(a: &FamilyArgs) -> Result<HiggsFamily, Error> {
    Ok(match a.kind {
        FamilyKind::CyclicQ => HiggsFamily::CyclicQ { q: gaussian_arg(&a.q, "q")? },
        FamilyKind::GenI => HiggsFamily::GenI { alpha: gaussian_arg(&a.alpha, "alpha")?, beta: gaussian_arg(&a.beta, "beta")? },
        FamilyKind::GenII => HiggsFamily::GenII { xi: gaussian_arg(&a.xi, "xi")? },
        FamilyKind::GenIII => HiggsFamily::GenIII { xi: gaussian_arg(&a.xi, "xi")? },
        FamilyKind::GenIV => HiggsFamily::GenIV { xi: gaussian_arg(&a.xi, "xi")? },
    })
}

fn higgs_cmd(c: &HiggsCmd, seed: u64) -> Result<Output, Error> {
    Ok(match c {
        HiggsCmd::Family(a) => {
            let f = family(a)?;
            let d = higgs::build_family(&f)?;
            let nil = higgs::check_nilpotency(&d);
            let sum_zero = (&(&d.r1 + &d.r2) + &d.r3).is_zero();
            let certs = vec![
                Certificate::with_value(
                    "residue_sum_zero",
                    !d.residue_sum_applies || sum_zero,
                    json!({ "applies": d.residue_sum_applies, "holds": sum_zero }),
                ),
                Certificate::check("trace_conditions", nil.iter().all(|r| r.trace_conditions)),
                Certificate::with_value(
                    "maximally_nilpotent",
                    nil.iter().all(|r| r.is_maximal()),
                    nil.iter().map(|r| r.index).collect::<Vec<_>>(),
                ),
            ];
            let config = higgs::kernel_configuration(&d);
            Output::json(json!(f), json!({ "residues": d, "nilpotency": nil, "kernel_configuration": config }), certs)
        }
        HiggsCmd::RealCheck(a) => {
            let f = family(a)?;
            let d = higgs::build_family(&f)?;
            let cert = higgs::real_criterion(&d, seed);
            let verified = cert.as_ref().map(|c| higgs::verify_real_certificate(&d, &c.g));
            let certs = vec![Certificate::with_value("certificate_verifies", verified.unwrap_or(true), json!({ "real": cert.is_some() }))];
            Output::json(json!({ "family": f, "seed": seed }), json!({ "real": cert.is_some(), "certificate": cert }), certs)
        }
    })
}

fn tzitzeica_cmd(c: &TzitzeicaCmd, csv: bool) -> Result<Output, Error> {
    let TzitzeicaCmd::Solve { background, q_sq, radius, grid, tol, max_iters, boundary } = c;
    let bg = match background {
        BackgroundArg::Flat => Background::FlatLocal,
        BackgroundArg::Hyperbolic => Background::HyperbolicDisk,
    };
    if !(q_sq.is_finite() && *q_sq >= 0.0) {
        return Err(Error::InvalidDomain(format!("|q|^2 = {q_sq} must be finite and non-negative")));
    }
    let p = TzitzeicaProblem::new(bg, QField::ModulusSq(*q_sq), *radius, *grid, Boundary::Constant(*boundary));
    let sol = tzitzeica::solve(&p, *tol, *max_iters)?;
    let metric = tzitzeica::blaschke_metric(&sol, &p);
    if csv {
        let n = sol.grid_n;
        let rows = (0..n * n)
            .filter(|&g| sol.mask[g])
            .map(|g| {
                let (i, j) = (g % n, g / n);
                vec![
                    i.to_string(),
                    j.to_string(),
                    p.coord(i).to_string(),
                    p.coord(j).to_string(),
                    sol.u[g].to_string(),
                    metric[g].map(|m| m.to_string()).unwrap_or_default(),
                ]
            })
            .collect();
        let header = ["i", "j", "x", "y", "u", "blaschke"].map(String::from).to_vec();
        return Ok(Output::Csv { header, rows, ok: true });
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (_, u) in sol.interior() {
        lo = lo.min(u);
        hi = hi.max(u);
    }
    let centre = sol.u[(sol.grid_n / 2) * sol.grid_n + sol.grid_n / 2];
    let input = json!({
        "background": bg, "q_sq": q_sq, "radius": radius, "grid": grid, "tol": tol, "max_iters": max_iters, "boundary": boundary,
    });
    let output = json!({
        "interior_nodes": sol.mask.iter().filter(|&&m| m).count(),
        "newton_iters": sol.newton_iters,
        "u_min": lo,
        "u_max": hi,
        "u_center": centre,
        "constant_solution": if *q_sq > 0.0 { Some(tzitzeica::constant_solution(*q_sq)) } else { None },
    });
    Ok(Output::json(input, output, vec![Certificate::with_value("residual_below_tol", sol.residual_inf <= *tol, sol.residual_inf)]))
}

fn cone_cmd(c: &ConeCmd) -> Result<Output, Error> {
    Ok(match c {
        ConeCmd::Verify { n, h, r_samples } => {
            if *r_samples == 0 {
                return Err(Error::InvalidDomain("--r-samples must be positive".into()));
            }
            let mut worst = (0.0f64, 0.0f64, 0.0f64);
            let mut convex = true;
            for r in verify::cone_sweep(*r_samples) {
                let g = ConeGeometry::new(*n, *h, r)?;
                worst.0 = worst.0.max(cone::verify_monge_ampere(&g)?);
                let d = verify::FD_STEP * r.min(1.0 - r);
                let second = cone::phi_second_difference(&g, d)?;
                convex &= second > 0.0;
                worst.1 = worst.1.max(verify::rel_err(second, g.phi_second()));
                worst.2 = worst.2.max(verify::rel_err(cone::phi_central_slope(&g, d)?, g.phi_prime()));
            }
            Output::json(
                json!({ "n": n, "H": h, "r_samples": r_samples }),
                json!({ "max_ma_residual": worst.0, "max_convexity_rel_err": worst.1, "max_slope_rel_err": worst.2 }),
                vec![
                    Certificate::with_value("monge_ampere", worst.0 < 1e-12, worst.0),
                    Certificate::with_value("strict_convexity", convex && worst.1 < 1e-6, worst.1),
                    Certificate::with_value("slope", worst.2 < 1e-6, worst.2),
                ],
            )
        }
        ConeCmd::Potential { r, n, h } => {
            let g = ConeGeometry::new(*n, *h, *r)?;
            let value = cone::phi(&g)?;
            let (c_rr, c_base) = cone::ma_metric_coeffs(&g)?;
            let ma = cone::verify_monge_ampere(&g)?;
            Output::json(
                json!({ "r": r, "n": n, "H": h }),
                json!({ "phi": value, "phi_prime": g.phi_prime(), "phi_second": g.phi_second(), "metric_rr": c_rr, "metric_base": c_base }),
                vec![Certificate::with_value("monge_ampere", ma < 1e-12, ma)],
            )
        }
        ConeCmd::Semiflat { base } => {
            let b = parse_real_matrix(base)?;
            let s = cone::semiflat_assemble(&b)?;
            let n = b.nrows();
            let jj = &s.j * &s.j;
            let j2 = (0..2 * n)
                .flat_map(|i| (0..2 * n).map(move |k| (i, k)))
                .map(|(i, k)| (jj[(i, k)] + if i == k { 1.0 } else { 0.0 }).abs())
                .fold(0.0, f64::max);
            let compat = (s.j.transpose() * &s.g * &s.j - &s.g).amax();
            let w = s.kahler_form();
            let skew = (&w + w.transpose()).amax();
            Output::json(
                json!({ "base": base }),
                json!({ "sample": s, "kahler_form": w.row_iter().map(|r| r.iter().copied().collect::<Vec<f64>>()).collect::<Vec<_>>() }),
                vec![
                    Certificate::with_value("j_squared_minus_identity", j2 < 1e-12, j2),
                    Certificate::with_value("j_orthogonal", compat < 1e-12, compat),
                    Certificate::with_value("kahler_form_skew", skew < 1e-12, skew),
                ],
            )
        }
    })
}

fn verify_all(seed: u64, csv: bool) -> Output {
    let reports = verify::run_all(seed);
    for r in &reports {
        eprintln!("criterion {:>2}: {:.1} ms", r.id, r.millis);
    }
    let ok = reports.iter().all(|r| r.passed);
    if csv {
        let rows = reports
            .iter()
            .map(|r| vec![r.id.to_string(), r.name.to_string(), if r.passed { "PASS" } else { "FAIL" }.to_string(), r.detail.clone()])
            .collect();
        return Output::Csv { header: ["criterion", "name", "result", "detail"].map(String::from).to_vec(), rows, ok };
    }
    let table: Vec<Value> =
        reports.iter().map(|r| json!({ "criterion": r.id, "name": r.name, "passed": r.passed, "detail": r.detail })).collect();
    let certs = reports.iter().map(|r| Certificate::check(&format!("criterion_{}", r.id), r.passed)).collect();
    Output::json(json!({ "seed": seed }), json!({ "all_passed": ok, "criteria": table }), certs)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Surface(s) => match s {
            SurfaceCmd::Eval { .. } => "surface eval",
            SurfaceCmd::Param { .. } => "surface param",
            SurfaceCmd::SolveZ { .. } => "surface solve-z",
            SurfaceCmd::Classify { .. } => "surface classify",
        },
        Command::Rep(r) => match r {
            RepCmd::Char(_) => "rep char",
            RepCmd::Invert { .. } => "rep invert",
            RepCmd::Normalize(_) => "rep normalize",
            RepCmd::Uniformization => "rep uniformization",
            RepCmd::Sym2 { .. } => "rep sym2",
        },
        Command::Integral(i) => match i {
            IntegralCmd::C1 { .. } => "integral c1",
            IntegralCmd::C2 { .. } => "integral c2",
            IntegralCmd::Scan { .. } => "integral scan",
        },
        Command::Higgs(HiggsCmd::Family(_)) => "higgs family",
        Command::Higgs(HiggsCmd::RealCheck(_)) => "higgs real-check",
        Command::Tzitzeica(_) => "tzitzeica solve",
        Command::Cone(c) => match c {
            ConeCmd::Verify { .. } => "cone verify",
            ConeCmd::Potential { .. } => "cone potential",
            ConeCmd::Semiflat { .. } => "cone semiflat",
        },
        Command::VerifyAll => "verify-all",
    }
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let csv_capable = matches!(cli.command, Command::Integral(_) | Command::Tzitzeica(_) | Command::VerifyAll);
    if cli.csv && !csv_capable {
        return Err(Error::Unsupported(format!("{} has no CSV output", command_name(&cli.command))));
    }
    match &cli.command {
        Command::Surface(c) => surface_cmd(c),
        Command::Rep(c) => rep_cmd(c),
        Command::Integral(c) => integral_cmd(c, cli.csv),
        Command::Higgs(c) => higgs_cmd(c, cli.seed),
        Command::Tzitzeica(c) => tzitzeica_cmd(c, cli.csv),
        Command::Cone(c) => cone_cmd(c),
        Command::VerifyAll => Ok(verify_all(cli.seed, cli.csv)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let out = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            let code = if matches!(e, Error::NonConvergence { .. }) { 2 } else { 1 };
            return ExitCode::from(code);
        }
    };
    let passed = out.passed();
    match out {
        Output::Json { input, output, certificates } => {
            let v = envelope(command_name(&cli.command), input, output, certificates);
            let text = serde_json::to_string_pretty(&v).expect("JSON values serialize");
            if writeln!(std::io::stdout().lock(), "{text}").is_err() {
                return ExitCode::from(1);
            }
        }
        Output::Csv { header, rows, .. } => {
            if let Err(e) = write_csv(&header, &rows) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        }
    }
    // only the acceptance run turns failed checks into a failing exit status
    if matches!(cli.command, Command::VerifyAll) && !passed {
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
