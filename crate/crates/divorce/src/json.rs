//! JSON mirrors of the text formats, search verdicts and reduction metadata.
//! Schemas are documented in `docs/formats.md`.

use divorce_core::explorer::{SearchVerdict, VerdictKind};
use divorce_core::reduction::ReductionArtifact;
use divorce_core::{AgentId, Instance, InstanceBuilder, Matching, ModelError, Pair, Side};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub prefs: Vec<PrefJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matching: Option<Vec<[String; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefJson {
    pub agent: String,
    pub tiers: Vec<Vec<String>>,
}

fn pair_names(inst: &Instance, p: Pair) -> [String; 2] {
    [inst.name(p.left_agent()).to_owned(), inst.name(p.right_agent()).to_owned()]
}

impl InstanceJson {
    pub fn new(inst: &Instance, matching: Option<&Matching>) -> Self {
        let mut prefs = Vec::new();
        for side in [Side::Left, Side::Right] {
            for a in inst.agents(side) {
                let tiers = inst
                    .prefs(a)
                    .tiers()
                    .iter()
                    .map(|t| {
                        t.iter().map(|&j| inst.name(AgentId { side: side.opposite(), index: j }).to_owned()).collect()
                    })
                    .collect();
                prefs.push(PrefJson { agent: inst.name(a).to_owned(), tiers });
            }
        }
        InstanceJson {
            left: inst.left_names().to_vec(),
            right: inst.right_names().to_vec(),
            prefs,
            matching: matching.map(|m| m.pairs().map(|p| pair_names(inst, p)).collect()),
        }
    }

    pub fn to_instance(&self) -> Result<(Instance, Option<Matching>), ModelError> {
        let mut b = InstanceBuilder::new();
        for n in &self.left {
            b.left(n.clone());
        }
        for n in &self.right {
            b.right(n.clone());
        }
        for p in &self.prefs {
            b.prefs_owned(p.agent.clone(), p.tiers.clone());
        }
        let inst = b.build()?;
        let matching = match &self.matching {
            Some(pairs) => {
                let named: Vec<(&str, &str)> = pairs.iter().map(|[l, r]| (l.as_str(), r.as_str())).collect();
                Some(Matching::from_names(&inst, &named)?)
            }
            None => None,
        };
        Ok((inst, matching))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub kind: String,
    pub witness: Option<Vec<[String; 2]>>,
    pub explored: usize,
    pub frontier_peak: usize,
}

impl VerdictJson {
    pub fn new(inst: &Instance, v: &SearchVerdict) -> Self {
        VerdictJson {
            kind: v.kind.code().to_owned(),
            witness: v.witness.as_ref().map(|w| w.iter().map(|&p| pair_names(inst, p)).collect()),
            explored: v.explored,
            frontier_peak: v.frontier_peak,
        }
    }

    /// Reads the verdict back against the instance it was produced for.
    pub fn to_verdict(&self, inst: &Instance) -> Result<SearchVerdict, ModelError> {
        let kind = match self.kind.as_str() {
            "REACHABLE_STABLE" => VerdictKind::ReachableStable,
            "NOT_REACHABLE" => VerdictKind::NotReachable,
            "INCONCLUSIVE" => VerdictKind::Inconclusive,
            other => return Err(ModelError::UnknownName(other.to_owned())),
        };
        let witness = match &self.witness {
            Some(pairs) => {
                let mut out = Vec::with_capacity(pairs.len());
                for [l, r] in pairs {
                    let find = |n: &str| inst.lookup(n).ok_or_else(|| ModelError::UnknownName(n.to_owned()));
                    out.push(Pair::from_agents(find(l)?, find(r)?)?);
                }
                Some(out)
            }
            None => None,
        };
        Ok(SearchVerdict { kind, witness, explored: self.explored, frontier_peak: self.frontier_peak })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaJson {
    pub n: usize,
    pub k: usize,
    pub agents_per_side: usize,
    pub vertices: Vec<VertexJson>,
    /// `a_i` with its initial partner (`s_i` or `t_{i-k}`).
    pub a: Vec<[String; 2]>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    /// 1-based, as in the graph file.
    pub vertex: usize,
    pub agent: String,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub edge: usize,
    /// `v` starts with its endpoint agent matched to `x`, `v_prime` to `c`.
    pub v: usize,
    pub v_prime: usize,
    pub e: String,
    pub f: String,
    pub x: String,
    pub c: String,
    pub ev: String,
    pub ev_prime: String,
    pub y: String,
    pub d: String,
}

impl MetaJson {
    pub fn new(art: &ReductionArtifact) -> Self {
        let inst = &art.instance;
        let meta = &art.meta;
        let l = |i: usize| inst.name(AgentId::left(i)).to_owned();
        let r = |i: usize| inst.name(AgentId::right(i)).to_owned();
        MetaJson {
            n: meta.n,
            k: meta.k,
            agents_per_side: inst.num_left(),
            vertices: (0..meta.n)
                .map(|i| VertexJson { vertex: i + 1, agent: l(meta.vertex[i]), b: r(meta.b[i]) })
                .collect(),
            a: meta.a.iter().map(|&a| [l(a), art.m0.partner_of_left(a).map(r).unwrap_or_default()]).collect(),
            edges: meta
                .edges
                .iter()
                .enumerate()
                .map(|(j, g)| EdgeJson {
                    edge: j + 1,
                    v: g.v + 1,
                    v_prime: g.v_prime + 1,
                    e: l(g.e),
                    f: l(g.f),
                    x: l(g.x),
                    c: l(g.c),
                    ev: r(g.ev),
                    ev_prime: r(g.ev_prime),
                    y: r(g.y),
                    d: r(g.d),
                })
                .collect(),
        }
    }
}
