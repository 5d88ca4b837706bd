mod cache;
mod output;
mod suite;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use pickychar::arith::nu_p_big;
use pickychar::bijection::{gamma_picky, gamma_reduction, inject_sign_fault, verify, Pairing};
use pickychar::criteria::SuiteConfig;
use pickychar::local::{irr_local, irr_local_degree_counts, LocalChar, LocalGroup};
use pickychar::partition::parse_partition;
use pickychar::subnormalizer::{all_two_elements, random_two_element, sub_bruteforce, sub_shape_2};
use pickychar::sylow::{all_block_structures, classify_picky, element_in_canonical, p_element_types, PickyType};
use pickychar::tower::nu_p_degree;
use pickychar::{degree, mn_value, partitions, CoreTower, CycleType, Partition, Permutation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use cache::cached_column;
use output::{int, pairing_json, report_json, uint, Output};

#[derive(Parser)]
#[command(name = "pickychar", version, about = "Characters, Sylow structure and local bijections of symmetric groups")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Upper bound on n for every command and suite family.
    #[arg(long, global = true)]
    max_n: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Character values and tables of S_n.
    #[command(subcommand)]
    Char(CharCmd),
    /// Hook lengths, cores and quotients.
    #[command(subcommand)]
    Partition(PartitionCmd),
    /// p-core towers.
    #[command(subcommand)]
    Tower(TowerCmd),
    /// Picky p-elements.
    #[command(subcommand)]
    Picky(PickyCmd),
    /// Block structures of Sylow subgroups.
    #[command(subcommand)]
    Sylow(SylowCmd),
    /// Subnormalizers of 2-elements.
    #[command(subcommand)]
    Sub(SubCmd),
    /// Characters of Sylow 2-subgroups of S_{2^k}.
    #[command(subcommand)]
    Local(LocalCmd),
    /// Character bijections and their verification.
    #[command(subcommand)]
    Bijection(BijectionCmd),
    /// Run every acceptance check and write reports.
    Suite(SuiteArgs),
}

#[derive(Subcommand)]
enum CharCmd {
    /// χ^λ at a cycle type.
    Eval {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: String,
        #[arg(long = "type")]
        ty: String,
    },
    /// Degrees, p-parts and values at the given cycle types.
    Table {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        p: usize,
        #[arg(long = "type")]
        types: Vec<String>,
    },
}

#[derive(Subcommand)]
enum PartitionCmd {
    /// Size, degree, hook lengths and q-core data.
    Info {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        q: Option<usize>,
    },
    /// All partitions of n, optionally only those of p'-degree.
    List {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p_prime: Option<usize>,
    },
}

#[derive(Subcommand)]
enum TowerCmd {
    /// The p-core tower of λ.
    Build {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        p: usize,
    },
}

#[derive(Subcommand)]
enum PickyCmd {
    /// Picky type of a p-element class.
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long = "type")]
        ty: String,
    },
    /// All picky classes of S_n.
    List {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
    },
}

#[derive(Subcommand)]
enum SylowCmd {
    /// Block structures of {1..n} for p.
    Blocks {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        /// Only print how many there are.
        #[arg(long)]
        count: bool,
    },
}

#[derive(Subcommand)]
enum SubCmd {
    /// Structural subnormalizer shape and order.
    Shape {
        #[arg(long)]
        perm: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Brute-force subnormalizer order.
    Brute {
        #[arg(long)]
        perm: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 2)]
        p: usize,
    },
    /// Shape orders against brute force for the 2-elements of S_n.
    Verify {
        #[arg(long)]
        n: usize,
        /// Random elements instead of all of them.
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Subcommand)]
enum LocalCmd {
    /// Irr(P_{2^k}) labels, or the degree multiset.
    Irr {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        degrees: bool,
    },
    /// A labelled character of P_{2^k} at an element.
    Eval {
        #[arg(long)]
        k: u32,
        #[arg(long = "char")]
        label: String,
        #[arg(long)]
        elem: String,
    },
}

#[derive(Args)]
struct PairingArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    p: usize,
    /// Cycle type of a 2-element; pairs Irr^x through its subnormalizer.
    #[arg(long)]
    element: Option<String>,
}

#[derive(Subcommand)]
enum BijectionCmd {
    /// Build a pairing.
    Build(PairingArgs),
    /// Build and verify a pairing.
    Verify {
        #[command(flatten)]
        args: PairingArgs,
        /// Flip one stored sign first; verification must then fail.
        #[arg(long)]
        inject_fault: bool,
    },
}

#[derive(Args)]
struct SuiteArgs {
    /// Report directory.
    #[arg(long, default_value = "suite-reports")]
    out: PathBuf,
    /// Run only these criteria (comma separated ids).
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
    /// Comma-separated primes for the prime-indexed families.
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 5, 7])]
    primes: Vec<usize>,
    /// Random 2-elements per degree in the large subnormalizer check.
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// Flip one stored sign in every pairing before verification.
    #[arg(long)]
    inject_fault: bool,
}

struct Ctx {
    seed: u64,
    max_n: Option<usize>,
}

impl Ctx {
    fn bound(&self, n: usize) -> Result<()> {
        match self.max_n {
            Some(m) if n > m => bail!("n = {n} exceeds --max-n {m}"),
            _ => Ok(()),
        }
    }
}

fn parse_type(text: &str, n: usize) -> Result<CycleType> {
    let t: CycleType = text.parse()?;
    let sum = t.n();
    if sum > n {
        bail!("cycle type {text} has {sum} points, more than n = {n}");
    }
    let mut lengths = t.lengths().to_vec();
    lengths.extend(std::iter::repeat_n(1, n - sum));
    Ok(CycleType::new(lengths)?)
}

fn parse_perm(text: &str, n: Option<usize>) -> Result<Permutation> {
    Ok(Permutation::parse(text, n)?)
}

fn char_cmd(cmd: CharCmd, ctx: &Ctx) -> Result<Output> {
    match cmd {
        CharCmd::Eval { n, lambda, ty } => {
            ctx.bound(n)?;
            let l = parse_partition(&lambda)?;
            let t = parse_type(&ty, n)?;
            let v = mn_value(&l, &t)?;
            Ok(Output::new("char-eval", json!({"n": n, "lambda": l, "type": t.to_string(), "value": int(&v)}), v.to_string()))
        }
        CharCmd::Table { n, p, types } => {
            ctx.bound(n)?;
            pickychar::arith::check_prime(p)?;
            let types: Vec<CycleType> = types.iter().map(|t| parse_type(t, n)).collect::<Result<_>>()?;
            let cols: Vec<std::collections::HashMap<Partition, BigInt>> =
                types.iter().map(|t| cached_column(t).map(|c| c.into_iter().collect())).collect::<Result<_>>()?;
            let mut records = Vec::new();
            let mut text = String::new();
            for l in partitions(n) {
                let d = degree(&l);
                let nu = nu_p_big(&d, p);
                let values: serde_json::Map<String, serde_json::Value> =
                    types.iter().zip(&cols).map(|(t, c)| (t.to_string(), int(&c[&l]))).collect();
                let vals: Vec<String> = cols.iter().map(|c| c[&l].to_string()).collect();
                text.push_str(&format!("{:<16} {d:>10} nu_{p}={nu} {}\n", l.to_string(), vals.join(" ")));
                records.push(json!({"lambda": l, "degree": uint(&d), "nu_p": nu, "values": values}));
            }
            Ok(Output::new("char-table", json!({"n": n, "p": p, "records": records}), text.trim_end()))
        }
    }
}

fn partition_cmd(cmd: PartitionCmd, ctx: &Ctx) -> Result<Output> {
    match cmd {
        PartitionCmd::Info { lambda, q } => {
            let l = parse_partition(&lambda)?;
            ctx.bound(l.size())?;
            let hooks: Vec<Vec<usize>> = l
                .parts()
                .iter()
                .enumerate()
                .map(|(i, &len)| (1..=len).map(|j| l.hook_length(pickychar::Cell { row: i + 1, col: j })).collect())
                .collect::<pickychar::Result<_>>()?;
            let d = degree(&l);
            let mut body = json!({"lambda": l, "size": l.size(), "degree": uint(&d), "hook_lengths": hooks, "is_hook": l.is_hook()});
            let mut text = format!("({l}) size {} degree {d}\nhook lengths {hooks:?}", l.size());
            if let Some(q) = q {
                let core = l.q_core(q)?;
                let quotient = l.q_quotient(q)?;
                let weight = l.q_weight(q)?;
                body["q"] = json!({"q": q, "core": core, "quotient": quotient, "weight": weight});
                let qs: Vec<String> = quotient.iter().map(|p| format!("({p})")).collect();
                text.push_str(&format!("\n{q}-core ({core}), {q}-quotient [{}], weight {weight}", qs.join(" ")));
            }
            Ok(Output::new("partition-info", body, text))
        }
        PartitionCmd::List { n, p_prime } => {
            ctx.bound(n)?;
            let all = match p_prime {
                Some(p) => pickychar::characters::irr_p_prime(n, p)?,
                None => partitions(n),
            };
            let text = all.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("\n");
            Ok(Output::new("partition-list", json!({"n": n, "p_prime": p_prime, "partitions": all}), text))
        }
    }
}

fn tower_cmd(cmd: TowerCmd, ctx: &Ctx) -> Result<Output> {
    let TowerCmd::Build { lambda, p } = cmd;
    let l = parse_partition(&lambda)?;
    ctx.bound(l.size())?;
    let t = CoreTower::build(&l, p)?;
    let nu = nu_p_degree(&l, p)?;
    let text = t
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| format!("{i}: {}", row.iter().map(|c| format!("({c})")).collect::<Vec<_>>().join(" ")))
        .chain(std::iter::once(format!("nu_{p}(degree) = {nu}")))
        .collect::<Vec<_>>()
        .join("\n");
    let mut body = serde_json::to_value(&t)?;
    body["nu_p_degree"] = json!(nu);
    Ok(Output::new("tower", body, text))
}

fn picky_cmd(cmd: PickyCmd, ctx: &Ctx) -> Result<Output> {
    match cmd {
        PickyCmd::Classify { n, p, ty } => {
            ctx.bound(n)?;
            let t = parse_type(&ty, n)?;
            let c = classify_picky(&t, p)?;
            Ok(Output::new("picky-classify", json!({"n": n, "p": p, "type": t.to_string(), "class": c.to_string()}), c.to_string()))
        }
        PickyCmd::List { n, p } => {
            ctx.bound(n)?;
            let mut rows = Vec::new();
            let mut text = Vec::new();
            for t in p_element_types(n, p) {
                let c = classify_picky(&t, p)?;
                if c != PickyType::NotPicky {
                    text.push(format!("{t}  {c}"));
                    rows.push(json!({"type": t.to_string(), "class": c.to_string()}));
                }
            }
            Ok(Output::new("picky-list", json!({"n": n, "p": p, "classes": rows}), text.join("\n")))
        }
    }
}

fn sylow_cmd(cmd: SylowCmd, ctx: &Ctx) -> Result<Output> {
    let SylowCmd::Blocks { n, p, count } = cmd;
    ctx.bound(n)?;
    let all = all_block_structures(n, p)?;
    if count {
        return Ok(Output::new("sylow-blocks", json!({"n": n, "p": p, "count": all.len()}), all.len().to_string()));
    }
    let list: Vec<String> = all.iter().map(|b| b.to_string()).collect();
    let text = list.join("\n");
    Ok(Output::new("sylow-blocks", json!({"n": n, "p": p, "count": all.len(), "structures": list}), text))
}

fn sub_cmd(cmd: SubCmd, ctx: &Ctx) -> Result<Output> {
    match cmd {
        SubCmd::Shape { perm, n } => {
            let x = parse_perm(&perm, n)?;
            ctx.bound(x.degree())?;
            let s = sub_shape_2(&x)?;
            let o = s.order();
            Ok(Output::new("sub-shape", json!({"perm": x.to_string(), "n": x.degree(), "shape": s.to_string(), "order": uint(&o)}), format!("{s}\norder {o}")))
        }
        SubCmd::Brute { perm, n, p } => {
            let x = parse_perm(&perm, n)?;
            ctx.bound(x.degree())?;
            let o = sub_bruteforce(&x, p)?.order();
            Ok(Output::new("sub-brute", json!({"perm": x.to_string(), "n": x.degree(), "p": p, "order": uint(&o)}), o.to_string()))
        }
        SubCmd::Verify { n, samples } => {
            ctx.bound(n)?;
            let xs = match samples {
                Some(k) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
                    (0..k).map(|_| random_two_element(n, &mut rng)).collect()
                }
                None => all_two_elements(n),
            };
            let mut disagreements = Vec::new();
            for x in &xs {
                let a = sub_shape_2(x)?.order();
                let b = sub_bruteforce(x, 2)?.order();
                if a != b {
                    disagreements.push(json!({"perm": x.to_string(), "shape_order": uint(&a), "brute_order": uint(&b)}));
                }
            }
            let agree = xs.len() - disagreements.len();
            let text = format!("{agree}/{} agree", xs.len());
            let failed = !disagreements.is_empty();
            Ok(Output::new("sub-verify", json!({"n": n, "checked": xs.len(), "agree": agree, "disagreements": disagreements}), text)
                .failing(failed))
        }
    }
}

fn local_cmd(cmd: LocalCmd) -> Result<Output> {
    match cmd {
        LocalCmd::Irr { k, degrees } => {
            if degrees {
                let counts = irr_local_degree_counts(k)?;
                let text = counts.iter().map(|(d, c)| format!("{d} x{c}")).collect::<Vec<_>>().join("\n");
                let body: serde_json::Map<String, serde_json::Value> =
                    counts.iter().map(|(d, c)| (d.to_string(), uint(c))).collect();
                Ok(Output::new("local-degrees", json!({"k": k, "degrees": body}), text))
            } else {
                let irr = irr_local(k)?;
                let rows: Vec<serde_json::Value> =
                    irr.iter().map(|c| json!({"label": c.to_string(), "degree": uint(&c.degree())})).collect();
                let text = irr.iter().map(|c| format!("{c}  {}", c.degree())).collect::<Vec<_>>().join("\n");
                Ok(Output::new("local-irr", json!({"k": k, "characters": rows}), text))
            }
        }
        LocalCmd::Eval { k, label, elem } => {
            let chi: LocalChar = label.parse()?;
            let group = LocalGroup::tower(k);
            let g = parse_perm(&elem, Some(group.degree()))?;
            let v = chi.value(&group, &g)?;
            Ok(Output::new(
                "local-eval",
                json!({"k": k, "char": chi.to_string(), "elem": g.to_string(), "value": int(&v)}),
                v.to_string(),
            ))
        }
    }
}

fn build_pairing(a: &PairingArgs, ctx: &Ctx) -> Result<Pairing> {
    ctx.bound(a.n)?;
    match &a.element {
        Some(ty) => {
            if a.p != 2 {
                bail!("--element pairs through subnormalizers of 2-elements; use --p 2");
            }
            let x = element_in_canonical(&parse_type(ty, a.n)?, 2)?;
            Ok(gamma_reduction(&x)?)
        }
        None => Ok(gamma_picky(a.n, a.p)?),
    }
}

fn bijection_cmd(cmd: BijectionCmd, ctx: &Ctx) -> Result<Output> {
    match cmd {
        BijectionCmd::Build(a) => {
            let p = build_pairing(&a, ctx)?;
            let text = p.triples.iter().map(|t| format!("({}) -> {}  {:?}", t.global, t.local, t.signs)).collect::<Vec<_>>().join("\n");
            Ok(Output::new("pairing", pairing_json(&p), format!("{} on {}\n{text}", p.context.kind, p.side)))
        }
        BijectionCmd::Verify { args, inject_fault } => {
            let mut p = build_pairing(&args, ctx)?;
            if inject_fault && !inject_sign_fault(&mut p) {
                bail!("no sign to flip in this pairing");
            }
            let r = verify(&p);
            let mut text = format!("{} n={} p={}: {} characters\n", r.context.kind, r.context.n, r.context.p, r.counts.global);
            for c in &r.checks {
                text.push_str(&format!("{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name));
                if let Some(w) = &c.witness {
                    text.push_str(&format!(": {w}"));
                }
                text.push('\n');
            }
            let failed = !r.passed();
            Ok(Output::new("report", report_json(&r), text.trim_end()).failing(failed))
        }
    }
}

fn run(cli: Cli) -> Result<Output> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().context("configuring worker threads")?;
    }
    let ctx = Ctx { seed: cli.seed, max_n: cli.max_n };
    match cli.command {
        Command::Char(c) => char_cmd(c, &ctx),
        Command::Partition(c) => partition_cmd(c, &ctx),
        Command::Tower(c) => tower_cmd(c, &ctx),
        Command::Picky(c) => picky_cmd(c, &ctx),
        Command::Sylow(c) => sylow_cmd(c, &ctx),
        Command::Sub(c) => sub_cmd(c, &ctx),
        Command::Local(c) => local_cmd(c),
        Command::Bijection(c) => bijection_cmd(c, &ctx),
        Command::Suite(a) => {
            let cfg = SuiteConfig {
                max_n: cli.max_n,
                primes: a.primes,
                seed: cli.seed,
                random_samples: a.samples,
                inject_fault: a.inject_fault,
            };
            suite::run_suite(&cfg, &a.only, &a.out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else if !out.text.is_empty() {
                println!("{}", out.text);
            }
            if out.failed {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
