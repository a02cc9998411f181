use std::collections::BTreeSet;
use std::io::Write;

use serde_json::{json, Value};
use stp_core::closures::{coparallel_closures_graph, parallel_closures_graph, Closure};
use stp_core::facets::{
    alternative_system, family_members, spanning_tree_polytope_system_with, ConstraintSystem, Family, Provenance,
    Selection,
};
use stp_core::graph::{blocks, induced_subgraph, is_biconnected, EdgeId, Graph, Subgraph};
use stp_core::locked::{
    enumerate_locked_subgraphs, is_locked_subgraph, LockedCertificate, LockedOptions, LockedVerdict,
};
use stp_core::oracle::{verify_system, VerifyOptions, DEFAULT_TREE_LIMIT};

use crate::edgelist::{read_edge_list, EdgeList};
use crate::formats::{write_ine, write_lp, write_text};
use crate::{
    json, AltArgs, BlocksArgs, Cli, CliError, ClosuresArgs, Command, FacetsArgs, Format, LockedArgs, Limits,
    OutputArgs, VerifyArgs,
};

pub const MAX_SUBSETS_VAR: &str = "STP_MAX_SUBSETS";

/// Runs a command and returns the process exit code. Data goes to `out`,
/// diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            if !matches!(e, CliError::VerificationFailed) {
                let _ = writeln!(err, "error: {e}");
            }
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Facets(a) => cmd_facets(&a, out, err),
        Command::Locked(a) => cmd_locked(&a, out, err),
        Command::Closures(a) => cmd_closures(&a, out, err),
        Command::Blocks(a) => cmd_blocks(&a, out, err),
        Command::Alt(a) => cmd_alt(&a, out, err),
        Command::Verify(a) => cmd_verify(&a, out, err),
    }
}

/// Caps from the environment: `STP_MAX_SUBSETS` bounds both the number of
/// vertex subsets scanned per block and the number of spanning trees.
fn env_cap() -> Result<Option<u64>, CliError> {
    match std::env::var(MAX_SUBSETS_VAR) {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| CliError::Parse(format!("{MAX_SUBSETS_VAR} must be a positive integer, got `{s}`"))),
        Err(_) => Ok(None),
    }
}

fn locked_options(limits: &Limits) -> Result<LockedOptions, CliError> {
    if let Some(max_n) = limits.max_n {
        return Ok(LockedOptions { max_n });
    }
    Ok(match env_cap()? {
        Some(cap) => LockedOptions {
            max_n: (u64::BITS - 1 - cap.max(1).leading_zeros()) as usize,
        },
        None => LockedOptions::default(),
    })
}

fn verify_options(hull: bool) -> Result<VerifyOptions, CliError> {
    let tree_limit = env_cap()?.map_or(DEFAULT_TREE_LIMIT, |c| c.min(usize::MAX as u64) as usize);
    Ok(VerifyOptions {
        tree_limit,
        compare_hull: hull,
        ..VerifyOptions::default()
    })
}

fn load(path: &str, err: &mut dyn Write) -> Result<Graph, CliError> {
    let EdgeList { graph, warnings } = read_edge_list(path)?;
    for w in warnings {
        writeln!(err, "warning: {w}")?;
    }
    if !graph.is_connected() {
        return Err(stp_core::Error::Disconnected.into());
    }
    Ok(graph)
}

fn emit(g: &Graph, sys: &ConstraintSystem, o: &OutputArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let text = match o.format {
        Format::Json => json::to_string(g, sys) + "\n",
        Format::Ine => write_ine(g, sys),
        Format::Lp => write_lp(g, sys, o.relaxed_bounds),
        Format::Text => write_text(g, sys),
    };
    out.write_all(text.as_bytes())?;
    if o.verify {
        let report = verify_system(g, sys, &verify_options(true)?)?;
        err.write_all(report.render(g).as_bytes())?;
        if !report.passed() {
            return Err(CliError::VerificationFailed);
        }
    }
    Ok(())
}

fn cmd_facets(a: &FacetsArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let g = load(&a.input, err)?;
    let sys = spanning_tree_polytope_system_with(&g, &locked_options(&a.limits)?)?.system;
    emit(&g, &sys, &a.output, out, err)
}

/// 2-connected blocks as standalone graphs with their edge-id maps.
fn biconnected_blocks(g: &Graph) -> Result<Vec<(Graph, Vec<EdgeId>)>, CliError> {
    Ok(blocks(g)?
        .blocks
        .iter()
        .filter(|b| b.m() >= 2)
        .map(Subgraph::to_graph)
        .collect())
}

fn labels_of(g: &Graph, origin: &[EdgeId], edges: &BTreeSet<EdgeId>) -> Vec<String> {
    g.edge_labels(edges.iter().map(|&e| origin[e]))
}

fn brace(items: &[String]) -> String {
    format!("{{{}}}", items.join(","))
}

fn certificate_json(bg: &Graph, g: &Graph, origin: &[EdgeId], c: &LockedCertificate) -> Value {
    json!({
        "vertices": bg.vertex_labels(c.vertices.iter().copied()),
        "edges": labels_of(g, origin, &c.edges),
        "n_h": c.n_h,
        "m_h": c.m_h,
        "n_hbar": c.n_hbar,
        "m_hbar": c.m_hbar,
        "boundary": c.boundary_size,
        "outside_connected": c.outside_connected,
        "rhs": c.n_h - 1,
    })
}

/// Induced 2-connected subgraphs with 3 ≤ |U| ≤ n − 1 that fail a later
/// condition, with their verdicts.
fn rejections(bg: &Graph, opts: &LockedOptions) -> Result<Vec<(BTreeSet<usize>, LockedVerdict)>, CliError> {
    let n = bg.n();
    if n > opts.max_n || n > 63 {
        return Err(stp_core::Error::Capacity {
            what: format!("scan of {n}-vertex block"),
            limit: opts.max_n as u64,
            hint: "raise --max-n".into(),
        }
        .into());
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if size < 3 || size + 1 > n {
            continue;
        }
        let u: BTreeSet<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if !is_biconnected(&induced_subgraph(bg, &u)?.to_graph().0) {
            continue;
        }
        let verdict = is_locked_subgraph(bg, &u)?;
        if !verdict.is_locked() {
            out.push((u, verdict));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

fn cmd_locked(a: &LockedArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let g = load(&a.input, err)?;
    let opts = locked_options(&a.limits)?;
    let mut report = Vec::new();
    for (bg, origin) in biconnected_blocks(&g)? {
        let locked = enumerate_locked_subgraphs(&bg, &opts)?;
        let rejected = if a.verbose { rejections(&bg, &opts)? } else { vec![] };
        report.push((bg, origin, locked, rejected));
    }
    if a.json {
        let blocks: Vec<Value> = report
            .iter()
            .map(|(bg, origin, locked, rejected)| {
                let mut v = json!({
                    "vertices": bg.vertices(),
                    "locked": locked.iter().map(|c| certificate_json(bg, &g, origin, c)).collect::<Vec<_>>(),
                });
                if a.verbose {
                    v["rejected"] = rejected
                        .iter()
                        .map(|(u, verdict)| rejection_json(bg, &g, origin, u, verdict))
                        .collect();
                }
                v
            })
            .collect();
        writeln!(out, "{}", serde_json::to_string_pretty(&json!({ "blocks": blocks })).expect("serializes"))?;
        return Ok(());
    }
    for (i, (bg, origin, locked, rejected)) in report.iter().enumerate() {
        writeln!(out, "block {i}: vertices {}", brace(bg.vertices()))?;
        if locked.is_empty() {
            writeln!(out, "  no locked subgraphs")?;
        }
        for c in locked {
            writeln!(
                out,
                "  locked {}: x(E(H)) <= {}; n_H={} m_H={} n_Hbar={} m_Hbar={} boundary={} outside connected",
                brace(&bg.vertex_labels(c.vertices.iter().copied())),
                c.n_h - 1,
                c.n_h,
                c.m_h,
                c.n_hbar,
                c.m_hbar,
                c.boundary_size
            )?;
        }
        for (u, verdict) in rejected {
            let LockedVerdict::NotLocked(reason) = verdict else { continue };
            let mut line = format!("  rejected {}: {}", brace(&bg.vertex_labels(u.iter().copied())), reason.failed);
            if let Some(w) = &reason.counting_witness {
                line.push_str(&format!(
                    "; L1={} L2={}: n_H + n = {} >= {} = n_(H+L1) + n_(H+L2)",
                    brace(&labels_of(&g, origin, &w.l1)),
                    brace(&labels_of(&g, origin, &w.l2)),
                    w.lhs(),
                    w.rhs()
                ));
            }
            writeln!(out, "{line}")?;
        }
    }
    Ok(())
}

fn rejection_json(bg: &Graph, g: &Graph, origin: &[EdgeId], u: &BTreeSet<usize>, verdict: &LockedVerdict) -> Value {
    let LockedVerdict::NotLocked(reason) = verdict else {
        return Value::Null;
    };
    let witness = reason.counting_witness.as_ref().map(|w| {
        json!({
            "l1": labels_of(g, origin, &w.l1),
            "l2": labels_of(g, origin, &w.l2),
            "n_h": w.n_h,
            "n": w.n,
            "n_h_l1": w.n_h_l1,
            "n_h_l2": w.n_h_l2,
            "lhs": w.lhs(),
            "rhs": w.rhs(),
        })
    });
    json!({
        "vertices": bg.vertex_labels(u.iter().copied()),
        "failed": reason.failed.to_string(),
        "witness": witness,
    })
}

fn closure_json(g: &Graph, origin: &[EdgeId], c: &Closure) -> Value {
    json!({
        "edges": labels_of(g, origin, &c.edges),
        "essential": c.essential,
        "reason": c.witness.as_ref().map(ToString::to_string),
    })
}

fn cmd_closures(a: &ClosuresArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let g = load(&a.input, err)?;
    let mut report = Vec::new();
    for (bg, origin) in biconnected_blocks(&g)? {
        let p = parallel_closures_graph(&bg)?;
        let s = coparallel_closures_graph(&bg)?;
        report.push((bg, origin, p, s));
    }
    if a.json {
        let blocks: Vec<Value> = report
            .iter()
            .map(|(bg, origin, p, s)| {
                json!({
                    "vertices": bg.vertices(),
                    "parallel": p.iter().map(|c| closure_json(&g, origin, c)).collect::<Vec<_>>(),
                    "coparallel": s.iter().map(|c| closure_json(&g, origin, c)).collect::<Vec<_>>(),
                })
            })
            .collect();
        writeln!(out, "{}", serde_json::to_string_pretty(&json!({ "blocks": blocks })).expect("serializes"))?;
        return Ok(());
    }
    for (i, (bg, origin, p, s)) in report.iter().enumerate() {
        writeln!(out, "block {i}: vertices {}", brace(bg.vertices()))?;
        for (name, classes) in [("parallel", p), ("coparallel", s)] {
            for c in classes.iter() {
                let status = match &c.witness {
                    None => "essential".to_string(),
                    Some(w) => format!("not essential ({w})"),
                };
                writeln!(out, "  {name} {}: {status}", brace(&labels_of(&g, origin, &c.edges)))?;
            }
        }
    }
    Ok(())
}

fn cmd_blocks(a: &BlocksArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let g = load(&a.input, err)?;
    let d = blocks(&g)?;
    let mut seen = BTreeSet::new();
    let mut cut = BTreeSet::new();
    for b in &d.blocks {
        for &v in &b.vertices {
            if !seen.insert(v) {
                cut.insert(v);
            }
        }
    }
    let cut = g.vertex_labels(cut);
    if a.json {
        let blocks: Vec<Value> = d
            .blocks
            .iter()
            .map(|b| {
                json!({
                    "kind": if b.m() == 1 { "bridge" } else { "2-connected" },
                    "vertices": g.vertex_labels(b.vertices.iter().copied()),
                    "edges": g.edge_labels(b.edges.iter().copied()),
                })
            })
            .collect();
        let v = json!({ "blocks": blocks, "cut_vertices": cut });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializes"))?;
        return Ok(());
    }
    writeln!(out, "{} blocks; cut vertices {}", d.blocks.len(), brace(&cut))?;
    for (i, b) in d.blocks.iter().enumerate() {
        writeln!(
            out,
            "block {i} ({}): vertices {} edges {}",
            if b.m() == 1 { "bridge" } else { "2-connected" },
            brace(&g.vertex_labels(b.vertices.iter().copied())),
            brace(&g.edge_labels(b.edges.iter().copied()))
        )?;
    }
    Ok(())
}

/// Resolves flip references against the members of one family.
fn resolve_flips(g: &Graph, sys: &ConstraintSystem, family: Family, refs: &[String]) -> Result<BTreeSet<Vec<usize>>, CliError> {
    let members = family_members(sys, family);
    let vertex_sets: Vec<Option<Vec<usize>>> = sys
        .inequalities
        .iter()
        .filter(|q| q.provenance.family() == Some(family))
        .map(|q| match &q.provenance {
            Provenance::LockedSubgraph(u) => Some(u.clone()),
            _ => None,
        })
        .collect();
    let mut out = BTreeSet::new();
    for r in refs.iter().map(|r| r.trim()).filter(|r| !r.is_empty()) {
        if r == "all" {
            out.extend(members.iter().cloned());
            continue;
        }
        if let Ok(i) = r.parse::<usize>() {
            let m = members
                .get(i)
                .ok_or_else(|| CliError::Parse(format!("{family:?} index {i} out of range ({} rows)", members.len())))?;
            out.insert(m.clone());
            continue;
        }
        let labels: Vec<&str> = r.split('+').filter(|s| !s.is_empty()).collect();
        let by_edges = g.edge_set(&labels).ok().map(|s| s.into_iter().collect::<Vec<_>>());
        let by_vertices = g.vertex_set(&labels).ok().map(|s| s.into_iter().collect::<Vec<_>>());
        let hit = members.iter().enumerate().find(|(k, m)| {
            by_edges.as_ref() == Some(*m) || (by_vertices.is_some() && vertex_sets[*k] == by_vertices)
        });
        match hit {
            Some((_, m)) => {
                out.insert(m.clone());
            }
            None => return Err(CliError::Parse(format!("`{r}` is not a {family:?} row"))),
        }
    }
    Ok(out)
}

fn cmd_alt(a: &AltArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let g = load(&a.input, err)?;
    let sys = spanning_tree_polytope_system_with(&g, &locked_options(&a.limits)?)?.system;
    let mut keep = Selection::keep_all(&sys);
    for (family, refs) in [
        (Family::Parallel, &a.flip_parallel),
        (Family::Coparallel, &a.flip_coparallel),
        (Family::Locked, &a.flip_locked),
    ] {
        for flipped in resolve_flips(&g, &sys, family, refs)? {
            keep.get_mut(family).remove(&flipped);
        }
    }
    let alt = alternative_system(&sys, &keep)?;
    emit(&g, &alt, &a.output, out, err)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let g = load(&a.input, err)?;
    let text = std::fs::read_to_string(&a.system).map_err(|e| CliError::Parse(format!("{}: {e}", a.system)))?;
    let j: json::SystemJson =
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("SystemJSON: {e}")))?;
    if j.graph != json::GraphJson::from_graph(&g) {
        writeln!(err, "warning: the system's graph differs from the input; rows are matched by edge label")?;
    }
    let sys = json::system_from_json(&g, &j)?;
    let report = verify_system(&g, &sys, &verify_options(!a.no_hull)?)?;
    out.write_all(report.render(&g).as_bytes())?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::VerificationFailed)
    }
}
