//! Entropy game model: a weighted tripartite digraph Despot -> Tribune ->
//! People -> Despot, its JSON form and its structural analysis.
//!
//! Node identity is the user-supplied string id; internally every node gets
//! a dense index in input order, and every adjacency list keeps arcs in input
//! order, so "smallest arc index" tie-breaking is simply "first in list".

use std::collections::{HashMap, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{scc_condense, Digraph};

/// Weight of a People -> Despot arc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Weight {
    Int(u64),
    Real(f64),
}

impl Weight {
    pub fn value(self) -> f64 {
        match self {
            Weight::Int(w) => w as f64,
            Weight::Real(w) => w,
        }
    }

    pub fn is_integer(self) -> bool {
        matches!(self, Weight::Int(_))
    }

    fn from_f64(w: f64) -> Self {
        if w.fract() == 0.0 && (1.0..=9_007_199_254_740_992.0).contains(&w) {
            Weight::Int(w as u64)
        } else {
            Weight::Real(w)
        }
    }
}

impl Default for Weight {
    fn default() -> Self {
        Weight::Int(1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Despot(usize),
    Tribune(usize),
    People(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub from: Node,
    pub to: Node,
    pub weight: Weight,
}

/// An available move: the arc index in the game's arc list and its target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Action {
    pub arc: usize,
    pub to: usize,
}

/// An entropy game. Immutable once built.
#[derive(Clone, Debug)]
pub struct EntropyGame {
    despot: Vec<String>,
    tribune: Vec<String>,
    people: Vec<String>,
    arcs: Vec<Arc>,
    initial: Option<usize>,
    despot_actions: Vec<Vec<Action>>,
    tribune_actions: Vec<Vec<Action>>,
    people_rows: Vec<Vec<(usize, f64)>>,
    max_weight: f64,
    integer_weights: bool,
}

/// Incremental construction of an [`EntropyGame`] by node index.
#[derive(Clone, Debug, Default)]
pub struct GameBuilder {
    despot: Vec<String>,
    tribune: Vec<String>,
    people: Vec<String>,
    arcs: Vec<Arc>,
    initial: Option<usize>,
}

impl GameBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn despot(&mut self, id: impl Into<String>) -> usize {
        self.despot.push(id.into());
        self.despot.len() - 1
    }

    pub fn tribune(&mut self, id: impl Into<String>) -> usize {
        self.tribune.push(id.into());
        self.tribune.len() - 1
    }

    pub fn people(&mut self, id: impl Into<String>) -> usize {
        self.people.push(id.into());
        self.people.len() - 1
    }

    pub fn despot_arc(&mut self, d: usize, t: usize) -> &mut Self {
        self.arcs.push(Arc { from: Node::Despot(d), to: Node::Tribune(t), weight: Weight::Int(1) });
        self
    }

    pub fn tribune_arc(&mut self, t: usize, p: usize) -> &mut Self {
        self.arcs.push(Arc { from: Node::Tribune(t), to: Node::People(p), weight: Weight::Int(1) });
        self
    }

    pub fn people_arc(&mut self, p: usize, d: usize, weight: Weight) -> &mut Self {
        self.arcs.push(Arc { from: Node::People(p), to: Node::Despot(d), weight });
        self
    }

    pub fn initial(&mut self, d: usize) -> &mut Self {
        self.initial = Some(d);
        self
    }

    pub fn build(self) -> Result<EntropyGame> {
        EntropyGame::from_parts(self.despot, self.tribune, self.people, self.arcs, self.initial)
    }
}

impl EntropyGame {
    fn from_parts(
        despot: Vec<String>,
        tribune: Vec<String>,
        people: Vec<String>,
        arcs: Vec<Arc>,
        initial: Option<usize>,
    ) -> Result<Self> {
        if despot.is_empty() {
            return Err(Error::EmptyGame);
        }
        let mut seen = HashSet::new();
        for id in despot.iter().chain(&tribune).chain(&people) {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateNode(id.clone()));
            }
        }
        let mut g = EntropyGame {
            despot_actions: Vec::new(),
            tribune_actions: Vec::new(),
            people_rows: Vec::new(),
            despot,
            tribune,
            people,
            arcs: Vec::new(),
            initial,
            max_weight: 0.0,
            integer_weights: true,
        };
        let mut despot_actions = vec![Vec::new(); g.despot.len()];
        let mut tribune_actions = vec![Vec::new(); g.tribune.len()];
        let mut people_rows = vec![Vec::new(); g.people.len()];
        let mut arc_set = HashSet::with_capacity(arcs.len());
        for (i, arc) in arcs.iter().enumerate() {
            g.node_id(arc.from)?;
            g.node_id(arc.to)?;
            let names = || (g.node_id(arc.from).unwrap().to_string(), g.node_id(arc.to).unwrap().to_string());
            if !arc_set.insert((arc.from, arc.to)) {
                let (from, to) = names();
                return Err(Error::DuplicateArc { from, to });
            }
            if !matches!((arc.from, arc.weight), (Node::People(_), _) | (_, Weight::Int(1))) {
                let (from, to) = names();
                return Err(Error::MisplacedWeight { from, to });
            }
            match (arc.from, arc.to) {
                (Node::Despot(d), Node::Tribune(t)) => {
                    despot_actions[d].push(Action { arc: i, to: t });
                }
                (Node::Tribune(t), Node::People(p)) => {
                    tribune_actions[t].push(Action { arc: i, to: p });
                }
                (Node::People(p), Node::Despot(d)) => {
                    let w = arc.weight.value();
                    if !(w.is_finite() && w > 0.0) {
                        let (from, to) = names();
                        return Err(Error::BadWeight { from, to, weight: w });
                    }
                    people_rows[p].push((d, w));
                    g.max_weight = g.max_weight.max(w);
                    g.integer_weights &= arc.weight.is_integer();
                }
                _ => {
                    let (from, to) = names();
                    return Err(Error::BadOrientation { from, to });
                }
            }
        }
        g.despot_actions = despot_actions;
        g.tribune_actions = tribune_actions;
        g.people_rows = people_rows;
        g.arcs = arcs;
        if let Some(d) = g.initial {
            if d >= g.despot.len() {
                return Err(Error::UnknownInitial(d.to_string()));
            }
        }
        for (d, a) in g.despot_actions.iter().enumerate() {
            if a.is_empty() {
                return Err(Error::NoSuccessor(g.despot[d].clone()));
            }
        }
        for (t, a) in g.tribune_actions.iter().enumerate() {
            if a.is_empty() {
                return Err(Error::NoSuccessor(g.tribune[t].clone()));
            }
        }
        for (p, r) in g.people_rows.iter().enumerate() {
            if r.is_empty() {
                return Err(Error::NoSuccessor(g.people[p].clone()));
            }
        }
        Ok(g)
    }

    fn node_id(&self, node: Node) -> Result<&str> {
        let (list, i) = match node {
            Node::Despot(i) => (&self.despot, i),
            Node::Tribune(i) => (&self.tribune, i),
            Node::People(i) => (&self.people, i),
        };
        list.get(i).map(String::as_str).ok_or_else(|| Error::DanglingArc(format!("{node:?}")))
    }

    /// Number of Despot states, `n`.
    pub fn n(&self) -> usize {
        self.despot.len()
    }

    pub fn num_tribune(&self) -> usize {
        self.tribune.len()
    }

    pub fn num_people(&self) -> usize {
        self.people.len()
    }

    pub fn despot_ids(&self) -> &[String] {
        &self.despot
    }

    pub fn tribune_ids(&self) -> &[String] {
        &self.tribune
    }

    pub fn people_ids(&self) -> &[String] {
        &self.people
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn initial(&self) -> Option<usize> {
        self.initial
    }

    pub fn despot_actions(&self, d: usize) -> &[Action] {
        &self.despot_actions[d]
    }

    pub fn tribune_actions(&self, t: usize) -> &[Action] {
        &self.tribune_actions[t]
    }

    /// Weighted successors `(d', m_{p d'})` of People node `p`.
    pub fn people_row(&self, p: usize) -> &[(usize, f64)] {
        &self.people_rows[p]
    }

    /// `W`, the largest weight.
    pub fn max_weight(&self) -> f64 {
        self.max_weight
    }

    pub fn has_integer_weights(&self) -> bool {
        self.integer_weights
    }

    /// `Σ m_{pd'} x_{d'}` over the arcs leaving `p`.
    pub fn people_dot(&self, p: usize, x: &[f64]) -> f64 {
        self.people_rows[p].iter().map(|&(d, w)| w * x[d]).sum()
    }

    /// The unique Tribune successor of each Despot state, when the game is
    /// Despot-free.
    pub fn sigma(&self) -> Option<Vec<usize>> {
        self.despot_actions
            .iter()
            .map(|a| if a.len() == 1 { Some(a[0].to) } else { None })
            .collect()
    }

    /// Tribune nodes that some Despot state can move to.
    pub fn reachable_tribune(&self) -> Vec<bool> {
        let mut r = vec![false; self.tribune.len()];
        for a in self.despot_actions.iter().flatten() {
            r[a.to] = true;
        }
        r
    }

    /// `|P_D|` as a float (may be huge).
    pub fn despot_policy_count(&self) -> f64 {
        self.despot_actions.iter().map(|a| a.len() as f64).product()
    }

    /// Number of Tribune policies that can make a difference (choices at
    /// Tribune nodes reachable from Despot states).
    pub fn tribune_policy_count(&self) -> f64 {
        let r = self.reachable_tribune();
        self.tribune_actions
            .iter()
            .zip(&r)
            .filter(|(_, &r)| r)
            .map(|(a, _)| a.len() as f64)
            .product()
    }

    /// The projected Despot graph: `d -> d'` iff some path `(d, t, p, d')`.
    pub fn projected_graph(&self) -> Digraph {
        let mut g = Digraph::new(self.n());
        for (d, acts) in self.despot_actions.iter().enumerate() {
            for a in acts {
                for b in &self.tribune_actions[a.to] {
                    for &(d2, _) in &self.people_rows[b.to] {
                        g.add_edge(d, d2);
                    }
                }
            }
        }
        g.normalize();
        g
    }

    pub fn classify(&self) -> GameClassification {
        let significant: Vec<usize> =
            (0..self.n()).filter(|&d| self.despot_actions[d].len() >= 2).collect();
        let tribune_free = self.tribune_actions.iter().all(|a| a.len() == 1);
        let cond = scc_condense(&self.projected_graph());
        GameClassification {
            despot_free: significant.is_empty(),
            tribune_free,
            irreducible: cond.len() == 1,
            significant,
        }
    }

    /// The reduced game on a strongly connected component of the projected
    /// graph: Despot states of `component`, Tribune actions that can stay in
    /// the component, People arcs into the component.
    pub fn subgame(&self, component: &[usize]) -> Result<Subgame> {
        let mut in_c = vec![false; self.n()];
        for &d in component {
            in_c[d] = true;
        }
        let despot_map: Vec<usize> = (0..self.n()).filter(|&d| in_c[d]).collect();
        let mut despot_new = vec![usize::MAX; self.n()];
        for (i, &d) in despot_map.iter().enumerate() {
            despot_new[d] = i;
        }
        let people_keeps =
            |p: usize| self.people_rows[p].iter().any(|&(d, _)| in_c[d]);

        let mut tribune_used = vec![false; self.tribune.len()];
        for &d in &despot_map {
            for a in &self.despot_actions[d] {
                tribune_used[a.to] = true;
            }
        }
        let tribune_map: Vec<usize> = (0..self.tribune.len()).filter(|&t| tribune_used[t]).collect();
        let mut people_used = vec![false; self.people.len()];
        for &t in &tribune_map {
            for a in &self.tribune_actions[t] {
                if people_keeps(a.to) {
                    people_used[a.to] = true;
                }
            }
        }
        let people_map: Vec<usize> = (0..self.people.len()).filter(|&p| people_used[p]).collect();
        let mut tribune_new = vec![usize::MAX; self.tribune.len()];
        for (i, &t) in tribune_map.iter().enumerate() {
            tribune_new[t] = i;
        }
        let mut people_new = vec![usize::MAX; self.people.len()];
        for (i, &p) in people_map.iter().enumerate() {
            people_new[p] = i;
        }

        let mut arcs = Vec::new();
        for arc in &self.arcs {
            let kept = match (arc.from, arc.to) {
                (Node::Despot(d), Node::Tribune(t)) if in_c[d] => {
                    Some((Node::Despot(despot_new[d]), Node::Tribune(tribune_new[t])))
                }
                (Node::Tribune(t), Node::People(p)) if tribune_used[t] && people_used[p] => {
                    Some((Node::Tribune(tribune_new[t]), Node::People(people_new[p])))
                }
                (Node::People(p), Node::Despot(d)) if people_used[p] && in_c[d] => {
                    Some((Node::People(people_new[p]), Node::Despot(despot_new[d])))
                }
                _ => None,
            };
            if let Some((from, to)) = kept {
                arcs.push(Arc { from, to, weight: arc.weight });
            }
        }
        let initial = self.initial.filter(|&d| in_c[d]).map(|d| despot_new[d]);
        let game = EntropyGame::from_parts(
            despot_map.iter().map(|&d| self.despot[d].clone()).collect(),
            tribune_map.iter().map(|&t| self.tribune[t].clone()).collect(),
            people_map.iter().map(|&p| self.people[p].clone()).collect(),
            arcs,
            initial,
        )
        .map_err(|e| match e {
            Error::NoSuccessor(id) => Error::EmptySubgameNode(id),
            e => e,
        })?;
        let parts = scc_condense(&game.projected_graph()).len();
        if parts != 1 {
            return Err(Error::NotIrreducible(parts));
        }
        Ok(Subgame { game, despot_map, tribune_map, people_map })
    }

    /// The game in which Despot is committed to `policy`: every Despot arc
    /// other than `(d, δ(d))` is removed. Node indices are unchanged.
    pub fn restrict_despot(&self, policy: &DespotPolicy) -> EntropyGame {
        let mut arcs = Vec::with_capacity(self.arcs.len());
        for arc in &self.arcs {
            if let (Node::Despot(d), Node::Tribune(t)) = (arc.from, arc.to) {
                if policy.0[d] != t {
                    continue;
                }
            }
            arcs.push(*arc);
        }
        EntropyGame::from_parts(
            self.despot.clone(),
            self.tribune.clone(),
            self.people.clone(),
            arcs,
            self.initial,
        )
        .expect("restriction of a valid game by a valid policy is valid")
    }

    pub fn to_json(&self) -> GameJson {
        let id = |n: Node| self.node_id(n).expect("valid node").to_string();
        GameJson {
            despot: self.despot.clone(),
            tribune: self.tribune.clone(),
            people: self.people.clone(),
            arcs: self
                .arcs
                .iter()
                .map(|a| ArcJson {
                    from: id(a.from),
                    to: id(a.to),
                    weight: match a.weight {
                        Weight::Int(1) => None,
                        Weight::Int(w) => Some(serde_json::Number::from(w)),
                        Weight::Real(w) => serde_json::Number::from_f64(w),
                    },
                })
                .collect(),
            initial: self.initial.map(|d| self.despot[d].clone()),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("game serializes")
    }
}

/// A reduced game together with the index maps back into the parent game.
#[derive(Clone, Debug)]
pub struct Subgame {
    pub game: EntropyGame,
    pub despot_map: Vec<usize>,
    pub tribune_map: Vec<usize>,
    pub people_map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameClassification {
    pub despot_free: bool,
    pub tribune_free: bool,
    pub irreducible: bool,
    /// Despot states with at least two actions.
    pub significant: Vec<usize>,
}

/// A positional Despot strategy: `δ(d)` as a Tribune index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DespotPolicy(Vec<usize>);

/// A positional Tribune strategy: `τ(t)` as a People index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TribunePolicy(Vec<usize>);

impl DespotPolicy {
    pub fn new(g: &EntropyGame, choice: Vec<usize>) -> Result<Self> {
        if choice.len() != g.n() {
            return Err(Error::Dimension { expected: g.n(), got: choice.len() });
        }
        for (d, &t) in choice.iter().enumerate() {
            if !g.despot_actions[d].iter().any(|a| a.to == t) {
                return Err(Error::InvalidPolicy(format!(
                    "no arc {} -> tribune #{t}",
                    g.despot[d]
                )));
            }
        }
        Ok(Self(choice))
    }

    pub fn first_actions(g: &EntropyGame) -> Self {
        Self(g.despot_actions.iter().map(|a| a[0].to).collect())
    }

    pub fn random(g: &EntropyGame, rng: &mut impl Rng) -> Self {
        Self(g.despot_actions.iter().map(|a| a[rng.gen_range(0..a.len())].to).collect())
    }

    pub fn get(&self, d: usize) -> usize {
        self.0[d]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub(crate) fn from_raw(v: Vec<usize>) -> Self {
        Self(v)
    }

    pub fn validate(&self, g: &EntropyGame) -> Result<()> {
        Self::new(g, self.0.clone()).map(|_| ())
    }

    /// `{despot id: tribune id}`.
    pub fn named(&self, g: &EntropyGame) -> Vec<(String, String)> {
        self.0.iter().enumerate().map(|(d, &t)| (g.despot[d].clone(), g.tribune[t].clone())).collect()
    }
}

impl TribunePolicy {
    pub fn new(g: &EntropyGame, choice: Vec<usize>) -> Result<Self> {
        if choice.len() != g.num_tribune() {
            return Err(Error::Dimension { expected: g.num_tribune(), got: choice.len() });
        }
        for (t, &p) in choice.iter().enumerate() {
            if !g.tribune_actions[t].iter().any(|a| a.to == p) {
                return Err(Error::InvalidPolicy(format!(
                    "no arc {} -> people #{p}",
                    g.tribune[t]
                )));
            }
        }
        Ok(Self(choice))
    }

    pub fn first_actions(g: &EntropyGame) -> Self {
        Self(g.tribune_actions.iter().map(|a| a[0].to).collect())
    }

    pub fn random(g: &EntropyGame, rng: &mut impl Rng) -> Self {
        Self(g.tribune_actions.iter().map(|a| a[rng.gen_range(0..a.len())].to).collect())
    }

    pub fn get(&self, t: usize) -> usize {
        self.0[t]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub(crate) fn from_raw(v: Vec<usize>) -> Self {
        Self(v)
    }

    pub(crate) fn set(&mut self, t: usize, p: usize) {
        self.0[t] = p;
    }

    pub fn validate(&self, g: &EntropyGame) -> Result<()> {
        Self::new(g, self.0.clone()).map(|_| ())
    }

    pub fn named(&self, g: &EntropyGame) -> Vec<(String, String)> {
        self.0.iter().enumerate().map(|(t, &p)| (g.tribune[t].clone(), g.people[p].clone())).collect()
    }
}

/// JSON document form of a game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameJson {
    pub despot: Vec<String>,
    pub tribune: Vec<String>,
    pub people: Vec<String>,
    pub arcs: Vec<ArcJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcJson {
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<serde_json::Number>,
}

impl GameJson {
    pub fn into_game(self) -> Result<EntropyGame> {
        let mut index: HashMap<&str, Node> = HashMap::new();
        for (i, id) in self.despot.iter().enumerate() {
            if index.insert(id, Node::Despot(i)).is_some() {
                return Err(Error::DuplicateNode(id.clone()));
            }
        }
        for (i, id) in self.tribune.iter().enumerate() {
            if index.insert(id, Node::Tribune(i)).is_some() {
                return Err(Error::DuplicateNode(id.clone()));
            }
        }
        for (i, id) in self.people.iter().enumerate() {
            if index.insert(id, Node::People(i)).is_some() {
                return Err(Error::DuplicateNode(id.clone()));
            }
        }
        let lookup = |id: &str| index.get(id).copied().ok_or_else(|| Error::DanglingArc(id.into()));
        let mut arcs = Vec::with_capacity(self.arcs.len());
        for a in &self.arcs {
            let (from, to) = (lookup(&a.from)?, lookup(&a.to)?);
            let weight = match &a.weight {
                None => Weight::Int(1),
                Some(num) => {
                    if !matches!((from, to), (Node::People(_), Node::Despot(_))) {
                        return Err(Error::MisplacedWeight { from: a.from.clone(), to: a.to.clone() });
                    }
                    match num.as_u64() {
                        Some(0) => {
                            return Err(Error::BadWeight {
                                from: a.from.clone(),
                                to: a.to.clone(),
                                weight: 0.0,
                            })
                        }
                        Some(w) => Weight::Int(w),
                        None => {
                            let w = num.as_f64().unwrap_or(f64::NAN);
                            if !(w.is_finite() && w > 0.0) {
                                return Err(Error::BadWeight {
                                    from: a.from.clone(),
                                    to: a.to.clone(),
                                    weight: w,
                                });
                            }
                            Weight::from_f64(w)
                        }
                    }
                }
            };
            arcs.push(Arc { from, to, weight });
        }
        let initial = match &self.initial {
            None => None,
            Some(id) => match index.get(id.as_str()) {
                Some(Node::Despot(d)) => Some(*d),
                _ => return Err(Error::UnknownInitial(id.clone())),
            },
        };
        EntropyGame::from_parts(self.despot, self.tribune, self.people, arcs, initial)
    }
}

/// Parses and validates a game from its JSON text.
pub fn parse_game(text: &str) -> Result<EntropyGame> {
    let doc: GameJson = serde_json::from_str(text)?;
    doc.into_game()
}

/// The three-state game whose horizon-k values follow the Fibonacci
/// sequence. Handy in tests and docs.
pub fn fibonacci_game() -> EntropyGame {
    parse_game(FIBONACCI_JSON).expect("built-in game is valid")
}

pub const FIBONACCI_JSON: &str = r#"{
  "despot": ["d1", "d2", "d3"],
  "tribune": ["t1", "t2", "t3", "t4"],
  "people": ["a", "b", "c", "d"],
  "arcs": [
    {"from": "d1", "to": "t1"}, {"from": "d1", "to": "t2"},
    {"from": "d2", "to": "t2"},
    {"from": "d3", "to": "t3"}, {"from": "d3", "to": "t4"},
    {"from": "t1", "to": "a"},
    {"from": "t2", "to": "a"}, {"from": "t2", "to": "b"},
    {"from": "t3", "to": "c"}, {"from": "t3", "to": "d"},
    {"from": "t4", "to": "c"},
    {"from": "a", "to": "d1"},
    {"from": "b", "to": "d2"}, {"from": "b", "to": "d3"},
    {"from": "c", "to": "d2"},
    {"from": "d", "to": "d2"}, {"from": "d", "to": "d3"}
  ]
}"#;

#[cfg(test)]
mod tests {
    use super::*;

    fn single_loop(w: u64) -> EntropyGame {
        let mut b = GameBuilder::new();
        let d = b.despot("d");
        let t = b.tribune("t");
        let p = b.people("p");
        b.despot_arc(d, t).tribune_arc(t, p).people_arc(p, d, Weight::Int(w));
        b.build().unwrap()
    }

    #[test]
    fn parses_fibonacci() {
        let g = fibonacci_game();
        assert_eq!(g.n(), 3);
        assert_eq!(g.num_tribune(), 4);
        assert_eq!(g.num_people(), 4);
        assert_eq!(g.arcs().len(), 17);
        assert_eq!(g.max_weight(), 1.0);
        assert!(g.has_integer_weights());
    }

    #[test]
    fn single_loop_is_valid() {
        let g = parse_game(
            r#"{"despot":["d"],"tribune":["t"],"people":["p"],
                "arcs":[{"from":"d","to":"t"},{"from":"t","to":"p"},{"from":"p","to":"d","weight":5}]}"#,
        )
        .unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.max_weight(), 5.0);
    }

    #[test]
    fn missing_people_successor_is_rejected() {
        let err = parse_game(
            r#"{"despot":["d"],"tribune":["t"],"people":["p","q"],
                "arcs":[{"from":"d","to":"t"},{"from":"t","to":"p"},{"from":"p","to":"d"}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("node without successor"), "{err}");
        assert!(matches!(err, Error::NoSuccessor(ref id) if id == "q"));
    }

    #[test]
    fn validation_errors() {
        let base = |arcs: &str| {
            format!(r#"{{"despot":["d"],"tribune":["t"],"people":["p"],"arcs":[{arcs}]}}"#)
        };
        let ok = r#"{"from":"d","to":"t"},{"from":"t","to":"p"}"#;
        assert!(matches!(
            parse_game(&base(&format!(r#"{ok},{{"from":"p","to":"x"}}"#))),
            Err(Error::DanglingArc(_))
        ));
        assert!(matches!(
            parse_game(&base(&format!(r#"{ok},{{"from":"p","to":"d","weight":0}}"#))),
            Err(Error::BadWeight { .. })
        ));
        assert!(matches!(
            parse_game(&base(&format!(r#"{ok},{{"from":"p","to":"d","weight":-2.5}}"#))),
            Err(Error::BadWeight { .. })
        ));
        assert!(matches!(
            parse_game(&base(&format!(r#"{ok},{{"from":"p","to":"d"}},{{"from":"d","to":"p"}}"#))),
            Err(Error::BadOrientation { .. })
        ));
        assert!(matches!(
            parse_game(&base(r#"{"from":"d","to":"t","weight":2},{"from":"t","to":"p"},{"from":"p","to":"d"}"#)),
            Err(Error::MisplacedWeight { .. })
        ));
        assert!(matches!(
            parse_game(&base(&format!(r#"{ok},{{"from":"p","to":"d"}},{{"from":"p","to":"d"}}"#))),
            Err(Error::DuplicateArc { .. })
        ));
        assert!(matches!(parse_game(r#"{"despot":["d"]}"#), Err(Error::Json(_))));
        assert!(matches!(
            parse_game(r#"{"despot":["d"],"tribune":["d"],"people":[],"arcs":[]}"#),
            Err(Error::DuplicateNode(_))
        ));
    }

    #[test]
    fn real_and_integral_weights() {
        let g = parse_game(
            r#"{"despot":["d"],"tribune":["t"],"people":["p"],
                "arcs":[{"from":"d","to":"t"},{"from":"t","to":"p"},{"from":"p","to":"d","weight":2.5}]}"#,
        )
        .unwrap();
        assert!(!g.has_integer_weights());
        let g = parse_game(
            r#"{"despot":["d"],"tribune":["t"],"people":["p"],
                "arcs":[{"from":"d","to":"t"},{"from":"t","to":"p"},{"from":"p","to":"d","weight":3.0}]}"#,
        )
        .unwrap();
        assert!(g.has_integer_weights());
        assert_eq!(g.arcs()[2].weight, Weight::Int(3));
    }

    #[test]
    fn fibonacci_projected_graph() {
        let h = fibonacci_game().projected_graph();
        let edges: Vec<_> = h.edges().collect();
        // d1->d1 (via t1,a and t2,a), d1->d2, d1->d3 (via t2,b),
        // d2->{d1,d2,d3}, d3->{d2,d3}
        assert_eq!(
            edges,
            vec![(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2)]
        );
        for e in [(0, 0), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2)] {
            assert!(h.has_edge(e.0, e.1));
        }
    }

    #[test]
    fn fibonacci_sccs() {
        let c = scc_condense(&fibonacci_game().projected_graph());
        assert_eq!(c.components, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn single_loop_projection_and_classification() {
        let g = single_loop(5);
        let h = g.projected_graph();
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 0)]);
        let c = g.classify();
        assert!(c.despot_free && c.tribune_free && c.irreducible);
        assert!(c.significant.is_empty());
    }

    #[test]
    fn disjoint_loops() {
        let mut b = GameBuilder::new();
        for i in 0..2 {
            let d = b.despot(format!("d{i}"));
            let t = b.tribune(format!("t{i}"));
            let p = b.people(format!("p{i}"));
            b.despot_arc(d, t).tribune_arc(t, p).people_arc(p, d, Weight::Int(1));
        }
        let g = b.build().unwrap();
        assert_eq!(g.projected_graph().edges().collect::<Vec<_>>(), vec![(0, 0), (1, 1)]);
        assert!(!g.classify().irreducible);
    }

    #[test]
    fn fibonacci_classification() {
        let c = fibonacci_game().classify();
        assert!(!c.despot_free);
        assert!(!c.tribune_free);
        assert_eq!(c.significant, vec![0, 2]);
    }

    #[test]
    fn whole_component_subgame_is_identity() {
        let g = single_loop(5);
        let s = g.subgame(&[0]).unwrap();
        assert_eq!(s.game.to_json(), g.to_json());
    }

    #[test]
    fn subgame_of_trivial_component_errors() {
        // d0 -> d1 only, d1 loops: {d0} is a trivial component.
        let mut b = GameBuilder::new();
        let d0 = b.despot("d0");
        let d1 = b.despot("d1");
        let t0 = b.tribune("t0");
        let t1 = b.tribune("t1");
        let p0 = b.people("p0");
        let p1 = b.people("p1");
        b.despot_arc(d0, t0).despot_arc(d1, t1);
        b.tribune_arc(t0, p0).tribune_arc(t1, p1);
        b.people_arc(p0, d1, Weight::Int(1)).people_arc(p1, d1, Weight::Int(2));
        let g = b.build().unwrap();
        assert!(matches!(g.subgame(&[0]), Err(Error::EmptySubgameNode(_))));
        let s = g.subgame(&[1]).unwrap();
        assert_eq!(s.game.n(), 1);
        assert_eq!(s.despot_map, vec![1]);
    }

    #[test]
    fn json_roundtrip_is_canonical() {
        let g = fibonacci_game();
        let text = g.to_json_string();
        let g2 = parse_game(&text).unwrap();
        assert_eq!(g2.to_json_string(), text);
    }

    #[test]
    fn restrict_despot_keeps_indices() {
        let g = fibonacci_game();
        let delta = DespotPolicy::new(&g, vec![0, 1, 3]).unwrap();
        let r = g.restrict_despot(&delta);
        assert!(r.classify().despot_free);
        assert_eq!(r.sigma().unwrap(), vec![0, 1, 3]);
        assert_eq!(r.num_tribune(), g.num_tribune());
    }

    #[test]
    fn policy_validation() {
        let g = fibonacci_game();
        assert!(DespotPolicy::new(&g, vec![0, 1, 2]).is_ok());
        assert!(DespotPolicy::new(&g, vec![2, 1, 2]).is_err());
        assert!(DespotPolicy::new(&g, vec![0, 1]).is_err());
        assert!(TribunePolicy::new(&g, vec![0, 1, 3, 2]).is_ok());
        assert!(TribunePolicy::new(&g, vec![0, 1, 3, 3]).is_err());
    }
}
