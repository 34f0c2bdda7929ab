use serde::Serialize;
use serde_json::{json, Value};
use sg_counterterm::{cancellation_report, VERDICT_ZERO};
use sg_moment_diagrams::{
    cut_candidates, divergent_subtrees, enumerate_forests, moment_terms, multilinearity_audit, subsets, Forest,
    MomentDiagram, NodeSet, Subtree, MAX_NODES,
};
use sg_multiscale::multiscale_audit;
use sg_power_counting::{
    big_graph_homogeneity, inner_homogeneity, large_scale_audit, sg_subdivergence_audit, sigma_tilde_audit,
    Margins, Violation,
};
use sg_rule_engine::{classify_trees, enumerate_negative, enumerate_trees, structural_audit};
use sg_tree_core::{DecoratedTree, Rational};

use crate::args::{DiagramArgs, DiagramCmd, MultiscaleCmd, PowerCmd, RenormCmd, TreesCmd};
use crate::output::{Artifact, Table};
use crate::params::{self, ModelConfig};
use crate::CliError;

const MAX_NCAP: u32 = 30;

fn keys<'a>(trees: impl IntoIterator<Item = &'a DecoratedTree>) -> Vec<String> {
    trees.into_iter().map(|t| t.key().to_string()).collect()
}

pub fn trees(cmd: &TreesCmd) -> Result<Artifact, CliError> {
    match cmd {
        TreesCmd::Enum { model, negative_only } => {
            let p = params::model(model)?;
            let cat = if *negative_only { enumerate_negative(&p)? } else { enumerate_trees(&p)? };
            let bb = p.beta_bar;
            let mut table = Table::new(&["key", "s_hom", "sg_hom", "charge", "n_noises", "n_edges", "negative", "neutral"]);
            let entries = cat.entries();
            for e in &entries {
                table.push(vec![
                    e.key.clone(),
                    e.s_hom.eval(bb).to_string(),
                    e.sg_hom.eval(bb).to_string(),
                    e.charge.to_string(),
                    e.n_noises.to_string(),
                    e.n_edges.to_string(),
                    e.negative.to_string(),
                    e.neutral.to_string(),
                ]);
            }
            let config = json!({ "model": ModelConfig::from(&p), "negative_only": negative_only, "cutoff": cat.cutoff.to_string(), "deco_cap": cat.deco_cap });
            let result = json!({
                "count": cat.len(),
                "negative": cat.negative,
                "negative_neutral": cat.negative_neutral,
                "trees": entries,
            });
            let mut art = Artifact::new("trees enum", config, result)?;
            art.table = Some(table);
            Ok(art)
        }
        TreesCmd::Classify { model } => {
            let p = params::model(model)?;
            let cat = enumerate_negative(&p)?;
            let cl = classify_trees(&cat)?;
            let structural = structural_audit(cat.all.values(), p.beta_bar);
            let result = json!({
                "negative": keys(&cl.negative),
                "negative_neutral": keys(&cl.negative_neutral),
                "non_renormalizable": keys(&cl.non_renormalizable),
                "structural": structural,
            });
            let mut art = Artifact::new("trees classify", json!({ "model": ModelConfig::from(&p) }), result)?;
            art.passed = Some(structural.passed());
            Ok(art)
        }
    }
}

pub fn renorm(cmd: &RenormCmd) -> Result<Artifact, CliError> {
    let RenormCmd::Cancel { model } = cmd;
    let p = params::model(model)?;
    let cat = enumerate_negative(&p)?;
    let config = json!({ "model": ModelConfig::from(&p) });
    let (result, passed) = match cancellation_report(&cat) {
        Ok(ledger) => {
            let ok = ledger.verdict == VERDICT_ZERO;
            let v = json!({
                "verdict": ledger.verdict,
                "pair_count": ledger.pairs.len(),
                "pairs": ledger.pairs,
                "parity_killed": ledger.parity_killed,
                "covered": ledger.covered(),
                "negative_neutral": cat.negative_neutral.len(),
            });
            (v, ok)
        }
        Err(e) => (json!({ "verdict": "not certified", "error": e.to_string() }), false),
    };
    let mut art = Artifact::new("renorm cancel", config, result)?;
    art.passed = Some(passed);
    Ok(art)
}

#[derive(Debug, Clone, Serialize)]
struct DiagramConfig {
    tree: String,
    p: usize,
    single: bool,
    beta_bar: String,
}

fn build_diagram(a: &DiagramArgs, default_bb: Option<Rational>) -> Result<(MomentDiagram, DiagramConfig), CliError> {
    let tree = params::tree(&a.tree)?;
    let bb = params::beta_bar(&a.model, default_bb)?;
    let d = if a.single { MomentDiagram::single_copy(&tree, bb)? } else { MomentDiagram::build(&tree, a.p, bb)? };
    let cfg = DiagramConfig { tree: tree.key().to_string(), p: a.p, single: a.single, beta_bar: bb.to_string() };
    Ok((d, cfg))
}

fn default_beta_bar() -> Option<Rational> {
    Some(Rational::new(6, 5))
}

pub fn diagram(cmd: &DiagramCmd) -> Result<Artifact, CliError> {
    match cmd {
        DiagramCmd::Terms { diagram } => {
            let (d, cfg) = build_diagram(diagram, default_beta_bar())?;
            let terms = moment_terms(&d);
            let forests = enumerate_forests(&divergent_subtrees(&d)).len();
            let result = json!({
                "node_count": d.node_count(),
                "forests": forests,
                "term_count": terms.len(),
                "terms": terms.iter().map(|t| t.to_json(&d)).collect::<Vec<Value>>(),
            });
            Artifact::new("diagram terms", cfg, result)
        }
        DiagramCmd::Audit { diagram } => {
            let (d, cfg) = build_diagram(diagram, default_beta_bar())?;
            let terms = moment_terms(&d);
            let report = multilinearity_audit(&d, &terms);
            let mut art = Artifact::new("diagram audit", cfg, &report)?;
            art.passed = Some(report.passed());
            Ok(art)
        }
    }
}

pub fn multiscale(cmd: &MultiscaleCmd) -> Result<Artifact, CliError> {
    let MultiscaleCmd::Audit { diagram, ncap, trials, seed } = cmd;
    if *ncap > MAX_NCAP {
        return Err(CliError::Usage(format!("--ncap {ncap} exceeds the cap of {MAX_NCAP}")));
    }
    let (d, cfg) = build_diagram(diagram, default_beta_bar())?;
    let report = multiscale_audit(&d, *ncap, *trials, *seed);
    let config = json!({ "diagram": cfg, "ncap": ncap, "trials": trials, "seed": seed });
    let mut art = Artifact::new("multiscale audit", config, &report)?;
    art.passed = Some(report.passed());
    Ok(art)
}

fn node_list(s: &str) -> Result<NodeSet, CliError> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .ok()
                .filter(|&u| u < MAX_NODES)
                .ok_or_else(|| CliError::Usage(format!("`{x}` is not a node id")))
        })
        .collect()
}

fn parse_forest(d: &MomentDiagram, spec: &str) -> Result<Forest, CliError> {
    let mut members = Vec::new();
    for part in spec.split(';').filter(|p| !p.trim().is_empty()) {
        let nodes = node_list(part)?;
        if !nodes.is_subset(&d.all_nodes()) {
            return Err(CliError::Usage(format!("--forest: node ids must lie in {:?}", d.all_nodes())));
        }
        let s = Subtree::from_nodes(d, nodes)
            .ok_or_else(|| CliError::Usage(format!("--forest: {{{part}}} is not a connected subtree")))?;
        members.push(s);
    }
    Ok(Forest::new(d, members)?)
}

fn parse_cuts(spec: &str) -> Result<(NodeSet, NodeSet), CliError> {
    let (mut always, mut harvested) = (NodeSet::EMPTY, NodeSet::EMPTY);
    for part in spec.split(';').filter(|p| !p.trim().is_empty()) {
        match part.split_once('=') {
            Some(("always", list)) => always = always.union(node_list(list)?),
            Some(("harvest", list)) => harvested = harvested.union(node_list(list)?),
            Some((k, _)) => return Err(CliError::Usage(format!("--cuts: unknown group `{k}`"))),
            None => always = always.union(node_list(part)?),
        }
    }
    Ok((always, harvested))
}

#[derive(Debug, Serialize)]
struct ConfigurationReport {
    forest: Vec<Vec<usize>>,
    always: Vec<usize>,
    harvested: Vec<usize>,
    subdivergence: sg_power_counting::AuditReport,
    sigma_tilde: sg_power_counting::SigmaTildeReport,
    large_scale: sg_power_counting::LargeScaleReport,
    /// `ς̃` audits of the inner graphs of the forest members.
    inner_passed: bool,
    passed: bool,
}

fn audit_configuration(
    d: &MomentDiagram,
    f: &Forest,
    always: NodeSet,
    harvested: NodeSet,
) -> Result<ConfigurationReport, CliError> {
    let sg = big_graph_homogeneity(d, f, always, harvested)?;
    let subdivergence = sg_subdivergence_audit(d, &sg, &sg.total())?;
    let sigma_tilde = sigma_tilde_audit(d, &sg)?;
    let large_scale = large_scale_audit(d, &sg)?;
    let mut inner_passed = true;
    for s in f.members() {
        for extra in [false, true] {
            inner_passed &= sigma_tilde_audit(d, &inner_homogeneity(d, f, s, extra)?)?.passed();
        }
    }
    let passed = subdivergence.passed()
        && sigma_tilde.passed()
        && large_scale.direct_violations.is_empty()
        && large_scale.relation_failures.is_empty()
        && large_scale.sign_violations.is_empty()
        && inner_passed;
    Ok(ConfigurationReport {
        forest: f.members().iter().map(|s| s.nodes.to_vec()).collect(),
        always: always.to_vec(),
        harvested: harvested.to_vec(),
        subdivergence,
        sigma_tilde,
        large_scale,
        inner_passed,
        passed,
    })
}

pub fn power(cmd: &PowerCmd) -> Result<Artifact, CliError> {
    let PowerCmd::Audit { diagram, forest, cuts, sweep } = cmd;
    let (d, cfg) = build_diagram(diagram, None)?;
    let mut configs = Vec::new();
    if *sweep {
        if forest.is_some() || cuts.is_some() {
            return Err(CliError::Usage("--sweep cannot be combined with --forest or --cuts".into()));
        }
        let cand = cut_candidates(&d);
        for f in enumerate_forests(&divergent_subtrees(&d)) {
            let free = cand.difference(f.kernel_edges());
            for a in subsets(free) {
                for h in subsets(free.difference(a)) {
                    configs.push((f.clone(), a, h));
                }
            }
        }
    } else {
        let f = match forest {
            Some(spec) => parse_forest(&d, spec)?,
            None => Forest::empty(),
        };
        let (a, h) = match cuts {
            Some(spec) => parse_cuts(spec)?,
            None => (NodeSet::EMPTY, NodeSet::EMPTY),
        };
        configs.push((f, a, h));
    }
    let reports =
        configs.iter().map(|(f, a, h)| audit_configuration(&d, f, *a, *h)).collect::<Result<Vec<_>, _>>()?;

    let checked: usize = reports.iter().map(|r| r.subdivergence.checked).sum();
    let violations: Vec<&Violation> = reports.iter().flat_map(|r| &r.subdivergence.violations).collect();
    let margins: Option<&Margins> = reports
        .iter()
        .map(|r| &r.subdivergence.margins)
        .filter(|m| m.min_f64.is_some())
        .min_by(|a, b| a.min_f64.partial_cmp(&b.min_f64).expect("finite margins"));
    let passed = reports.iter().all(|r| r.passed);
    let result = json!({
        "context": if *sweep { "sweep" } else { "big-graph" },
        "checked": checked,
        "violations": violations,
        "margins": margins.cloned().unwrap_or_default(),
        "passed": passed,
        "configurations": reports,
    });
    let config = json!({ "diagram": cfg, "forest": forest, "cuts": cuts, "sweep": sweep });
    let mut art = Artifact::new("power audit", config, result)?;
    art.passed = Some(passed);
    Ok(art)
}
