//! Command-line front end. [`execute`] does all the work so that tests can
//! drive it without spawning a process.

use std::fmt::Write as _;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use raag::genset::GeneratorSet;
use raag::graph::Graph;
use raag::ia_kernel::{check_presentation_relations, iaut_generators, verify_rewriting_identities, FamilyCount};
use raag::io;
use raag::q_reduce::q_reduce;
use raag::stabilizer::{build_delta, mod_generators, stabilizer_generators};
use raag::symplectic::{enumerate_q_generators, wedge_act, SymplecticStructure};
use raag::whitehead::enumerate_omega;
use raag::words::{cyclic_canonical_capped, normalize, parse_word};
use raag::{Caps, Error, IntMatrix, Result, VertexSet};

#[derive(Parser, Debug)]
#[command(
    name = "raag",
    version,
    about = "Computations with right-angled Artin groups and their symplectic structures"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Vertex cap for graph-automorphism and generator enumeration.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap_vertices: u64,
    /// Vertex cap for enumerating Whitehead automorphisms.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap_omega: u64,
    /// State cap for breadth-first searches.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap_states: u64,
    /// Seed for randomized inputs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Emit DOT where supported.
    #[arg(long, global = true)]
    pub dot: bool,
}

impl Global {
    fn caps(&self) -> Caps {
        Caps {
            vertices: self.cap_vertices as usize,
            omega_vertices: self.cap_omega as usize,
            states: self.cap_states as usize,
            ..Caps::default()
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct GraphArg {
    /// Graph file, `-` for stdin, or inline text/JSON.
    #[arg(long, short)]
    pub graph: String,
}

#[derive(Args, Debug, Clone)]
pub struct StructArg {
    #[command(flatten)]
    pub graph: GraphArg,
    /// Structure JSON `{"pairs":[["a","b"],...]}` as a file or inline.
    #[arg(long, short)]
    pub structure: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Domination relation and domination classes.
    Dominance(GraphArg),
    /// Normal form of a word.
    Normalize {
        #[command(flatten)]
        graph: GraphArg,
        word: Vec<String>,
    },
    /// Conjugacy length and canonical cyclic form.
    ConjLength {
        #[command(flatten)]
        graph: GraphArg,
        word: Vec<String>,
    },
    /// Counts of Ω, Ω_ℓ and Ω_s.
    Omega {
        #[command(flatten)]
        graph: GraphArg,
        /// List every element.
        #[arg(long)]
        list: bool,
    },
    /// Apply an automorphism (JSON factor tokens) to a word.
    Apply {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, short)]
        auto: String,
        word: Vec<String>,
    },
    /// Generating set of IAut.
    IaGens(GraphArg),
    /// Check the conjugation identities for commutator transvections.
    VerifyIdentities(GraphArg),
    /// Check the presentation relations of the transvection subgroup.
    Relations {
        #[command(flatten)]
        graph: GraphArg,
        /// Subset Z as comma-separated names (default: all vertices).
        #[arg(long)]
        z: Option<String>,
    },
    /// Factor a Q-preserving matrix into Q-transvections and Q-inversions.
    Qreduce {
        #[command(flatten)]
        s: StructArg,
        /// Matrix JSON (list of rows) as a file or inline.
        #[arg(long, short, conflicts_with = "random_length")]
        matrix: Option<String>,
        /// Instead of a matrix, factor a random product of this many
        /// Q-generators drawn with `--seed`.
        #[arg(long)]
        random_length: Option<usize>,
    },
    /// Whitehead graph of [w₀].
    Delta(StructArg),
    /// Generators of the pure stabilizer of ([w₀], Q).
    StabGens(StructArg),
    /// Generators of Mod(Γ, w₀, Q).
    ModGens(StructArg),
    /// Validate a symplectic structure and print w, Q and supports.
    CheckStructure(StructArg),
    /// Whether an automorphism preserves (w, Q).
    Preserves {
        #[command(flatten)]
        s: StructArg,
        #[arg(long, short)]
        auto: String,
    },
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Read a file, stdin for `-`, or take the argument itself as the payload.
fn load(arg: &str) -> Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Error::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    let p = Path::new(arg);
    if !arg.contains('\n') && !arg.trim_start().starts_with(['{', '[']) && p.is_file() {
        return std::fs::read_to_string(p).map_err(|e| Error::Input(format!("{arg}: {e}")));
    }
    Ok(arg.to_string())
}

fn load_graph(a: &GraphArg) -> Result<Graph> {
    let text = load(&a.graph)?;
    if !text.contains("vertices") {
        return Err(Error::Input(format!("{:?} is neither a readable file nor a graph description", a.graph)));
    }
    Graph::parse(&text)
}

fn load_structure(a: &StructArg) -> Result<(Graph, SymplecticStructure)> {
    let g = load_graph(&a.graph)?;
    let s = SymplecticStructure::from_json(&g, &load(&a.structure)?)?;
    Ok((g, s))
}

pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    match run(&cli) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn render(global: &Global, value: Value, text: String) -> String {
    if global.json {
        let mut s = serde_json::to_string_pretty(&value).expect("JSON values always serialize");
        s.push('\n');
        s
    } else {
        text
    }
}

fn families_text(title: &str, families: &std::collections::BTreeMap<String, FamilyCount>) -> String {
    let mut t = format!("{title}\n");
    let width = families.keys().map(|k| k.chars().count()).max().unwrap_or(0);
    for (name, c) in families {
        let status = if c.passed == c.instances { "ok" } else { "FAIL" };
        let _ = writeln!(t, "  {name:<width$}  {:>6}/{:<6} {status}", c.passed, c.instances);
    }
    t
}

fn genset_text(g: &Graph, set: &GeneratorSet) -> String {
    let mut t = format!("{}: {} elements\n", set.name, set.len());
    let mut counts = std::collections::BTreeMap::new();
    for e in set.iter() {
        *counts.entry(e.tag.as_str()).or_insert(0usize) += 1;
    }
    for (tag, c) in &counts {
        let _ = writeln!(t, "  {tag:<20} {c}");
    }
    for e in set.iter() {
        let imgs: Vec<String> = (0..g.n()).map(|x| format!("{}↦{}", g.name(x), e.auto.image(x).display(g))).collect();
        let _ = writeln!(t, "[{}] {}: {}", e.tag, e.label, imgs.join(", "));
    }
    t
}

fn run(cli: &Cli) -> Result<String> {
    let gl = &cli.global;
    let caps = gl.caps();
    match &cli.command {
        Command::Dominance(ga) => {
            let g = load_graph(ga)?;
            let n = g.n();
            let strict: Vec<(usize, usize)> = (0..n)
                .flat_map(|x| (0..n).map(move |y| (x, y)))
                .filter(|&(x, y)| x != y && g.dominates(x, y) && !g.dominates(y, x))
                .collect();
            let classes = g.domination_classes()?;
            let mut t = String::from("strict dominations:\n");
            for &(x, y) in &strict {
                let _ = writeln!(t, "  {} ≥ {}", g.name(x), g.name(y));
            }
            t.push_str("classes:\n");
            for c in &classes {
                let kind = match (c.adjacent, c.nonadjacent) {
                    (true, false) => "adjacent",
                    (false, true) => "non-adjacent",
                    _ => "singleton",
                };
                let _ = writeln!(t, "  {} {kind}", g.format_vertex_set(c.members));
            }
            let mut table = String::from("table (row dominates column):\n");
            let width = g.names().iter().map(|s| s.chars().count()).max().unwrap_or(1);
            let _ = write!(table, "  {:width$}", "");
            for y in 0..n {
                let _ = write!(table, " {:>width$}", g.name(y));
            }
            table.push('\n');
            for x in 0..n {
                let _ = write!(table, "  {:width$}", g.name(x));
                for y in 0..n {
                    let _ = write!(table, " {:>width$}", if g.dominates(x, y) { "1" } else { "." });
                }
                table.push('\n');
            }
            t.push_str(&table);
            let value = json!({
                "strict": strict.iter().map(|&(x, y)| json!([g.name(x), g.name(y)])).collect::<Vec<_>>(),
                "dominates": (0..n).map(|x| (0..n).map(|y| g.dominates(x, y)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "classes": classes.iter().map(|c| json!({
                    "members": c.members.iter().map(|v| g.name(v)).collect::<Vec<_>>(),
                    "adjacent": c.adjacent,
                    "nonadjacent": c.nonadjacent,
                })).collect::<Vec<_>>(),
            });
            Ok(render(gl, value, t))
        }
        Command::Normalize { graph, word } => {
            let g = load_graph(graph)?;
            let w = parse_word(&g, &word.join(" "))?;
            let nf = normalize(&g, &w);
            let text = nf.display(&g).to_string();
            Ok(render(gl, json!({"normal_form": text, "length": nf.len()}), format!("{text}\n")))
        }
        Command::ConjLength { graph, word } => {
            let g = load_graph(graph)?;
            let w = parse_word(&g, &word.join(" "))?;
            let c = cyclic_canonical_capped(&g, &w, caps.states)?;
            let text = c.display(&g).to_string();
            Ok(render(
                gl,
                json!({"conjugacy_length": c.len(), "cyclic_normal_form": text}),
                format!("{}\n{text}\n", c.len()),
            ))
        }
        Command::Omega { graph, list } => {
            let g = load_graph(graph)?;
            let om = enumerate_omega(&g, &caps)?;
            let type1 = om.omega.iter().filter(|w| w.is_permutation()).count();
            let counts = json!({
                "omega": om.omega.len(),
                "type1": type1,
                "type2": om.omega.len() - type1,
                "long_range": om.long_range.len(),
                "short_range": om.short_range.len(),
            });
            let mut t = format!(
                "|Ω| = {} (type 1: {}, type 2: {})\n|Ω_ℓ| = {}\n|Ω_s| = {}\n",
                om.omega.len(),
                type1,
                om.omega.len() - type1,
                om.long_range.len(),
                om.short_range.len()
            );
            let mut value = json!({"counts": counts});
            if *list {
                let labels: Vec<String> = om.omega.iter().map(|w| w.label(&g)).collect();
                for l in &labels {
                    let _ = writeln!(t, "{l}");
                }
                value["elements"] = json!(labels);
            }
            Ok(render(gl, value, t))
        }
        Command::Apply { graph, auto, word } => {
            let g = load_graph(graph)?;
            let a = io::parse_automorphism(&g, &load(auto)?)?;
            let w = parse_word(&g, &word.join(" "))?;
            let img = a.apply(&g, &w);
            let text = img.display(&g).to_string();
            Ok(render(
                gl,
                json!({"image": text, "automorphism": io::automorphism_to_json(&g, &a)}),
                format!("{text}\n"),
            ))
        }
        Command::IaGens(ga) => {
            let g = load_graph(ga)?;
            let set = iaut_generators(&g, caps.vertices)?;
            Ok(render(gl, io::generator_set_to_json(&g, &set), genset_text(&g, &set)))
        }
        Command::VerifyIdentities(ga) => {
            let g = load_graph(ga)?;
            let rep = verify_rewriting_identities(&g)?;
            let mut t = families_text("conjugation identities", &rep.families);
            let _ = writeln!(t, "  skipped tuples: {}", rep.skipped);
            Ok(render(gl, serde_json::to_value(&rep).expect("report serializes"), t))
        }
        Command::Relations { graph, z } => {
            let g = load_graph(graph)?;
            let zset = match z {
                None => g.all(),
                Some(list) => list
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| g.vertex(s.trim()))
                    .collect::<Result<VertexSet>>()?,
            };
            let rep = check_presentation_relations(&g, zset)?;
            let mut t = families_text("presentation relations", &rep.families);
            let _ = writeln!(
                t,
                "  tuples violating the printed (rr1) side condition: {}",
                rep.rr1_printed_condition_failures
            );
            Ok(render(gl, serde_json::to_value(&rep).expect("report serializes"), t))
        }
        Command::Qreduce { s, matrix, random_length } => {
            let (g, st) = load_structure(s)?;
            let m = match (matrix, random_length) {
                (Some(m), _) => io::matrix_from_value(&io::parse_json("matrix", &load(m)?)?)?,
                (None, Some(len)) => random_q_product(&g, &st, *len, gl.seed)?,
                (None, None) => return Err(Error::Input("qreduce needs --matrix or --random-length".into())),
            };
            let f = q_reduce(&g, &st, &m)?;
            let verified = f.product(&g, &st)? == m;
            let factors: Vec<Value> = f
                .factors
                .iter()
                .map(|x| json!({"kind": x.kind.tag(), "label": x.kind.label(&g), "power": x.power}))
                .collect();
            let mut t =
                format!("{} factors, {} Euclid steps, verified: {verified}\n", f.factors.len(), f.euclid_iterations);
            for x in &f.factors {
                let _ = writeln!(t, "  {}^{}", x.kind.label(&g), x.power);
            }
            let value = json!({
                "input": io::matrix_to_json(&m),
                "factors": factors,
                "euclid_iterations": f.euclid_iterations,
                "verified": verified,
            });
            Ok(render(gl, value, t))
        }
        Command::Delta(sa) => {
            let (g, st) = load_structure(sa)?;
            let d = build_delta(&g, &st, &caps)?;
            if gl.dot {
                return Ok(d.to_dot(&g));
            }
            let t = format!(
                "base: {}\nvertices: {}\nedges: {} ({} loops)\n|Ω| after removing repeated actions: {}\n",
                d.base().display(&g),
                d.len(),
                d.edges.len(),
                d.loop_count(),
                d.omega.len()
            );
            let value = json!({
                "base": d.base().display(&g).to_string(),
                "vertices": d.vertices.iter().map(|v| v.display(&g).to_string()).collect::<Vec<_>>(),
                "edge_count": d.edges.len(),
                "loop_count": d.loop_count(),
                "omega": d.omega.len(),
            });
            Ok(render(gl, value, t))
        }
        Command::StabGens(sa) => {
            let (g, st) = load_structure(sa)?;
            let set = stabilizer_generators(&g, &st, &caps)?;
            Ok(render(gl, io::generator_set_to_json(&g, &set), genset_text(&g, &set)))
        }
        Command::ModGens(sa) => {
            let (g, st) = load_structure(sa)?;
            let set = mod_generators(&g, &st, &caps)?;
            Ok(render(gl, io::generator_set_to_json(&g, &set), genset_text(&g, &set)))
        }
        Command::CheckStructure(sa) => {
            let (g, st) = load_structure(sa)?;
            let t = format!(
                "w = {}\nQ = {}\nk = {}, genus = {}\nsupp w = {}\nsupp Q = {}\n",
                st.w().display(&g),
                st.q().display(&g),
                st.k(),
                st.genus(),
                g.format_vertex_set(st.supp_w()),
                g.format_vertex_set(st.supp_q())
            );
            let value = json!({
                "structure": st.to_json(&g),
                "w": st.w().display(&g).to_string(),
                "Q": st.q().to_json(&g),
                "k": st.k(),
                "genus": st.genus(),
                "supp_w": st.supp_w().iter().map(|v| g.name(v)).collect::<Vec<_>>(),
                "supp_Q": st.supp_q().iter().map(|v| g.name(v)).collect::<Vec<_>>(),
            });
            Ok(render(gl, value, t))
        }
        Command::Preserves { s, auto } => {
            let (g, st) = load_structure(s)?;
            let a = io::parse_automorphism(&g, &load(auto)?)?;
            let image = a.apply(&g, st.w().letters());
            let fixes_w = image == *st.w();
            let fixes_q = wedge_act(&a.homology_matrix(), st.q()) == *st.q();
            let t = format!(
                "α(w) = {}\nfixes w: {fixes_w}\nfixes Q: {fixes_q}\npreserves: {}\n",
                image.display(&g),
                fixes_w && fixes_q
            );
            let value = json!({
                "image_of_w": image.display(&g).to_string(),
                "fixes_w": fixes_w,
                "fixes_q": fixes_q,
                "preserves": fixes_w && fixes_q,
            });
            Ok(render(gl, value, t))
        }
    }
}

/// Product of `len` random Q-generator matrices and their inverses.
fn random_q_product(g: &Graph, s: &SymplecticStructure, len: usize, seed: u64) -> Result<IntMatrix> {
    let gens = enumerate_q_generators(g, s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = IntMatrix::identity(g.n());
    for _ in 0..len {
        let Some(q) = gens.choose(&mut rng) else { break };
        let power = *[1i64, -1].choose(&mut rng).unwrap();
        m = m.try_mul(&q.kind.matrix_pow(g, s, power))?;
    }
    Ok(m)
}
