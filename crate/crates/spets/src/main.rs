use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use spets::cyclotomic::Cyclo;
use spets::hecke::{root_name, monomial_name, CyclicHeckeParams};
use spets::laurent::k_cyclotomic_factors;
use spets::orders::{order_polys, sylow_suite};
use spets::tabledata::{
    diff_tables, emit_uch, load_group_data, load_reference, parse_chartab, parse_frac_monomial, parse_field,
    parse_uch, read_data, read_file, render_uch, resolve_group, schur_data_from_reference, split_top, DataError,
    PhiLabels,
};
use spets::uch::{
    adopt_reference, construct, cyclic_series_eigenvalues, cyclic_uch, determine_parameters, ennola_extend,
    principal_one_series, verify_axioms, Construction, GroupData, UchTable,
};

#[derive(Parser)]
#[command(name = "spets", version, about = "Unipotent characters of split spetses")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Orders, degrees and hyperplane data of a group.
    Analyze { group: String },
    /// Order polynomials and the Sylow congruences.
    Orders { group: String },
    /// Construct the table of unipotent characters.
    Uch {
        group: Option<String>,
        #[arg(long)]
        cyclic: Option<u64>,
        /// Take names and sign conventions from this table.
        #[arg(long = "ref")]
        reference: Option<PathBuf>,
        /// Print the canonical file format.
        #[arg(long)]
        canonical: bool,
    },
    /// Determine the spetsial algebra of a cyclic principal ζ-series.
    Series {
        group: String,
        /// ζ = exp(2πi a/d), given as d/a.
        #[arg(long)]
        zeta: String,
    },
    /// Schur elements of a cyclic Hecke algebra.
    Schur {
        #[arg(long)]
        cyclic: u64,
        /// Comma separated monomials, e.g. `x,zeta3,zeta3^2`.
        #[arg(long)]
        params: String,
    },
    /// Construct, compare with a reference and check the axioms.
    Verify {
        group: String,
        #[arg(long = "ref")]
        reference: Option<PathBuf>,
    },
    /// K-cyclotomic factors of Φ_d.
    Factors {
        d: u64,
        /// Conductor n for Q(ζ_n), or generators such as `sqrt(5),zeta3`.
        #[arg(long, default_value = "1")]
        field: String,
    },
    /// Rewrite a table file in canonical form.
    Canon { file: PathBuf },
    /// Schur elements of H_W read off a reference table.
    DeriveSchur {
        group: String,
        #[arg(long = "ref")]
        reference: PathBuf,
    },
}

type Res = Result<ExitCode, Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Analyze { group } => analyze(&group),
        Cmd::Orders { group } => orders(&group),
        Cmd::Uch { group, cyclic, reference, canonical } => uch(group, cyclic, reference, canonical),
        Cmd::Series { group, zeta } => series(&group, &zeta),
        Cmd::Schur { cyclic, params } => schur(cyclic, &params),
        Cmd::Verify { group, reference } => verify(&group, reference),
        Cmd::Factors { d, field } => factors(d, &field),
        Cmd::Canon { file } => canon(&file),
        Cmd::DeriveSchur { group, reference } => derive_schur(&group, &reference),
    };
    match r {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn analyze(group: &str) -> Res {
    let g = resolve_group(group)?;
    let o = order_polys(&g);
    println!("group      {}", g.name());
    println!("order      {}", g.order());
    println!("rank       {}", g.rank());
    println!("field      Q(zeta{})", g.field().conductor());
    let degs: Vec<String> = g.degrees()?.degrees.iter().map(|(d, _)| d.to_string()).collect();
    println!("degrees    {}", degs.join(" "));
    println!("N^ref      {}", g.n_ref());
    println!("N^hyp      {}", g.n_hyp());
    println!("e_W        {}", g.e_w());
    println!("|ZW|       {}", g.center_scalars().len());
    println!("classes    {}", g.classes().len());
    for (k, orb) in g.hyperplane_orbits().iter().enumerate() {
        println!("orbit {k}    {} hyperplanes, e_H = {}", orb.size, orb.e_h);
    }
    println!("Poincare   {}", o.poincare);
    println!("|G|_c      {}", o.order_c);
    println!("|G|_nc     {}", o.order_nc);
    let regs: Vec<String> = regular_eigenvalues(&g).iter().map(root_name).collect();
    println!("regular    {}", regs.join(" "));
    Ok(ExitCode::SUCCESS)
}

fn regular_eigenvalues(g: &spets::reflection::ReflectionCoset) -> Vec<Cyclo> {
    let mut out = Vec::new();
    let degs = g.degrees().map(|d| d.degrees.clone()).unwrap_or_default();
    let top = degs.iter().map(|(d, _)| *d).max().unwrap_or(1);
    for d in 1..=top {
        if !degs.iter().any(|(e, _)| e % d == 0) {
            continue;
        }
        for a in 0..d {
            if num_integer::gcd(a, d) == 1 || d == 1 {
                let z = Cyclo::root_of_unity(d, a as i64);
                if !g.regular_classes(&z).is_empty() {
                    out.push(z);
                }
            }
        }
    }
    out
}

fn orders(group: &str) -> Res {
    let g = resolve_group(group)?;
    let o = order_polys(&g);
    println!("Poincare  {}", o.poincare);
    println!("|G|_c     {}", o.order_c);
    println!("|G|_nc    {}", o.order_nc);
    let mut ok = true;
    for r in sylow_suite(&g)? {
        ok &= r.ok();
        println!(
            "{} Phi = {}: multiplicity {}, torus dim {}, |W_G(L)| = {}, remainders {} / {}",
            if r.ok() { "ok  " } else { "FAIL" },
            r.phi,
            r.multiplicity,
            r.torus_dim,
            r.relative_order,
            r.remainder_c,
            r.remainder_nc
        );
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn build(gd: &GroupData) -> Result<Construction, Box<dyn std::error::Error>> {
    Ok(construct(gd, &cyclic_series_eigenvalues(gd))?)
}

fn reference_for(group: &str, file: Option<PathBuf>) -> Result<Option<UchTable>, DataError> {
    match file {
        Some(f) => parse_uch(&read_file(&f)?).map(Some),
        None => Ok(load_reference(group).ok()),
    }
}

fn uch(group: Option<String>, cyclic: Option<u64>, reference: Option<PathBuf>, canonical: bool) -> Res {
    let (group, mut table) = match (group, cyclic) {
        (_, Some(e)) => (format!("Z{e}"), cyclic_uch(e)),
        (Some(g), None) => {
            let gd = load_group_data(&g)?;
            let c = build(&gd)?;
            for s in &c.series {
                eprintln!(
                    "{}: {}  funnel {:?}  new {:?}",
                    root_name(&s.zeta),
                    s.spec.notation(),
                    s.funnel,
                    s.new
                );
            }
            (g, c.table)
        }
        (None, None) => return Err("give a group or --cyclic e".into()),
    };
    if let Some(r) = reference_for(&group, reference)? {
        adopt_reference(&mut table, &r);
    }
    if canonical {
        print!("{}", emit_uch(&table));
    } else {
        print!("{}", render_uch(&table));
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_zeta(s: &str) -> Result<Cyclo, Box<dyn std::error::Error>> {
    let (d, a) = s.split_once('/').ok_or("expected d/a")?;
    let d: u64 = d.trim().parse()?;
    let a: i64 = a.trim().parse()?;
    if d == 0 {
        return Err("d must be positive".into());
    }
    Ok(Cyclo::root_of_unity(d, a))
}

fn series(group: &str, zeta: &str) -> Res {
    let z = parse_zeta(zeta)?;
    let gd = load_group_data(group)?;
    let mut table = UchTable {
        group: gd.g.name().to_string(),
        field: gd.g.field().conductor(),
        order: order_polys(&gd.g).order_c,
        chars: principal_one_series(&gd)?,
    };
    ennola_extend(&gd, &mut table);
    let det = determine_parameters(&gd, &z, &table)?;
    println!("{} : {}", root_name(&z), det.spec.notation());
    let [a, b, c, d] = det.funnel;
    println!("assignments {a}, after Fr {b}, after rationality {c}, after containment {d}");
    for (j, (deg, fr, hit)) in det.members.iter().enumerate() {
        let known = hit.map_or("new".to_string(), |(i, s)| format!("{}{}", if s < 0 { "-" } else { "" }, table.chars[i].name));
        println!("  chi{j}: {deg}  Fr {}  {known}", monomial_name(fr));
    }
    Ok(ExitCode::SUCCESS)
}

fn schur(e: u64, params: &str) -> Res {
    let params = split_top(params).iter().map(|p| parse_frac_monomial(p)).collect::<Result<Vec<_>, _>>()?;
    if params.len() as u64 != e {
        return Err(format!("expected {e} parameters, got {}", params.len()).into());
    }
    let h = CyclicHeckeParams { params };
    let (d, s) = h.schur_v()?;
    let var = if d == 1 { "x".to_string() } else { format!("v = x^(1/{d})") };
    println!("Schur elements in {var}");
    for (i, p) in s.iter().enumerate() {
        println!("  S{i} = {p}");
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(group: &str, reference: Option<PathBuf>) -> Res {
    let gd = load_group_data(group)?;
    let c = build(&gd)?;
    let mut table = c.table;
    let ctx = gd.verify_context();
    let mut ok = true;
    match reference_for(group, reference)? {
        Some(mut r) => {
            adopt_reference(&mut table, &r);
            for t in gd.label_principal(&mut r)? {
                println!("reference table lacks the principal character {t}");
                ok = false;
            }
            let diff = diff_tables(&table, &r);
            println!("diff against reference: {} entries", diff.len());
            for d in &diff {
                println!("  {d}");
            }
            ok &= diff.is_empty();
            let rr = verify_axioms(&r, &ctx);
            println!("reference table axioms: {}", if rr.passed() { "pass" } else { "FAIL" });
            for f in rr.failures() {
                println!("  {} {}: {}", f.check, f.subject, f.detail);
            }
            ok &= rr.passed();
        }
        None => println!("no reference table"),
    }
    let rep = verify_axioms(&table, &ctx);
    print!("{rep}");
    ok &= rep.passed();
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn factors(d: u64, field: &str) -> Res {
    let k = parse_field(field)?;
    let labels = PhiLabels::shipped().ok();
    for f in k_cyclotomic_factors(d, &k) {
        let roots: Vec<String> = f.roots.iter().map(|a| format!("E({},{a})", f.root_order)).collect();
        let label = labels.and_then(|l| l.label_of(&f.poly)).unwrap_or("");
        println!("{:<12} {}   roots {}", label, f.poly, roots.join(" "));
    }
    Ok(ExitCode::SUCCESS)
}

fn canon(file: &Path) -> Res {
    print!("{}", emit_uch(&parse_uch(&read_file(file)?)?));
    Ok(ExitCode::SUCCESS)
}

fn derive_schur(group: &str, reference: &Path) -> Res {
    let g = resolve_group(group)?;
    let chars = parse_chartab(&read_data(&format!("chartab/{}.tbl", g.name()))?, &g)?;
    let r = parse_uch(&read_file(reference)?)?;
    print!("{}", schur_data_from_reference(&g, &chars, &r)?.emit());
    Ok(ExitCode::SUCCESS)
}
