//! Floor diagrams for the degrees of the projective plane and of
//! `P1 × P1`, their markings and refined multiplicities.
//!
//! Floors are numbered `1..=n` from the bottom. Elevators are vertical: a
//! finite elevator joins an upper floor to a lower one, infinite elevators
//! leave a floor downwards (`(0,-1)` ends) or upwards (`(0,1)` ends).

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{CurveCombinatorics, EdgeRecord, Endpoint, VertexRecord};
use crate::lattice::{factorial, BalancedDegree, LatticePolygon};
use crate::poset::Poset;
use crate::RefinedPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FloorShape {
    /// Degree `Δ_d`: `d` floors with ends `(-1,0)` and `(1,1)`.
    P2 { d: u32 },
    /// Degree `Δ_{d,r}`: `r` floors with ends `(±1,0)`, `d` elevators each way.
    P1xP1 { d: u32, r: u32 },
}

impl FloorShape {
    pub fn n_floors(self) -> u32 {
        match self {
            FloorShape::P2 { d } => d,
            FloorShape::P1xP1 { r, .. } => r,
        }
    }

    /// Infinite elevators per direction.
    fn vertical_ends(self) -> u64 {
        match self {
            FloorShape::P2 { d } | FloorShape::P1xP1 { d, .. } => u64::from(d),
        }
    }

    /// Vertical divergence each floor must absorb.
    fn floor_divergence(self) -> i64 {
        match self {
            FloorShape::P2 { .. } => 1,
            FloorShape::P1xP1 { .. } => 0,
        }
    }

    pub fn polygon(self) -> LatticePolygon {
        match self {
            FloorShape::P2 { d } => LatticePolygon::triangle(i64::from(d)),
            FloorShape::P1xP1 { d, r } => LatticePolygon::rectangle(i64::from(d), i64::from(r)),
        }
    }

    pub fn degree(self) -> BalancedDegree {
        self.polygon().primitive_degree()
    }

    /// Recognizes the triangle `(0,0),(d,0),(0,d)` and the rectangle `[0,d]×[0,r]`.
    pub fn from_polygon(poly: &LatticePolygon) -> Option<Self> {
        let v = poly.vertices();
        match v.len() {
            3 => {
                let d = v[1].x;
                (*poly == LatticePolygon::triangle(d)).then_some(FloorShape::P2 { d: d as u32 })
            }
            4 => {
                let (d, r) = (v[2].x, v[2].y);
                (*poly == LatticePolygon::rectangle(d, r)).then_some(FloorShape::P1xP1 {
                    d: d as u32,
                    r: r as u32,
                })
            }
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Elevator {
    pub lower: u32,
    pub upper: u32,
    pub weight: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FloorDiagram {
    pub n_floors: u32,
    /// Sorted by `(lower, upper, weight)`.
    pub elevators: Vec<Elevator>,
    /// Index `v - 1` holds the count for floor `v`.
    pub infinite_down: Vec<u64>,
    pub infinite_up: Vec<u64>,
}

impl FloorDiagram {
    pub fn genus(&self) -> i64 {
        self.elevators.len() as i64 - i64::from(self.n_floors) + 1
    }

    /// Σ weights of finite elevators leaving floor `v` downwards.
    pub fn out_weight(&self, v: u32) -> u64 {
        self.elevators
            .iter()
            .filter(|e| e.upper == v)
            .map(|e| e.weight)
            .sum()
    }

    /// Σ weights of finite elevators arriving at floor `v` from above.
    pub fn in_weight(&self, v: u32) -> u64 {
        self.elevators
            .iter()
            .filter(|e| e.lower == v)
            .map(|e| e.weight)
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n_floors as usize;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for e in &self.elevators {
            let a = find(&mut parent, e.lower as usize - 1);
            let b = find(&mut parent, e.upper as usize - 1);
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (0..n).all(|i| find(&mut parent, i) == root)
    }

    /// Checks the divergence rule of `shape` and connectivity.
    pub fn is_valid(&self, shape: FloorShape) -> bool {
        let n = self.n_floors;
        if n != shape.n_floors()
            || self.infinite_down.len() != n as usize
            || self.infinite_up.len() != n as usize
        {
            return false;
        }
        if self
            .elevators
            .iter()
            .any(|e| e.lower >= e.upper || e.lower == 0 || e.upper > n || e.weight == 0)
        {
            return false;
        }
        let div = shape.floor_divergence();
        let balanced = (1..=n).all(|v| {
            let i = v as usize - 1;
            self.out_weight(v) as i64 + self.infinite_down[i] as i64
                == self.in_weight(v) as i64 + self.infinite_up[i] as i64 + div
        });
        let ends = shape.vertical_ends();
        let up_ok = match shape {
            FloorShape::P2 { .. } => self.infinite_up.iter().all(|&u| u == 0),
            FloorShape::P1xP1 { .. } => self.infinite_up.iter().sum::<u64>() == ends,
        };
        balanced && up_ok && self.infinite_down.iter().sum::<u64>() == ends && self.is_connected()
    }

    /// The marking poset (floors, finite elevators, infinite elevators) and
    /// the sizes of the groups of interchangeable elements.
    pub fn marking_poset(&self) -> (Poset, Vec<u64>) {
        let n = self.n_floors as usize;
        let total_inf: u64 = self.infinite_down.iter().chain(&self.infinite_up).sum();
        let size = n + self.elevators.len() + total_inf as usize;
        let mut poset = Poset::new(size);
        for v in 1..n {
            poset.add_relation(v - 1, v);
        }
        let mut next = n;
        for e in &self.elevators {
            poset.add_relation(e.lower as usize - 1, next);
            poset.add_relation(next, e.upper as usize - 1);
            next += 1;
        }
        for (v, &k) in self.infinite_down.iter().enumerate() {
            for _ in 0..k {
                poset.add_relation(next, v);
                next += 1;
            }
        }
        for (v, &k) in self.infinite_up.iter().enumerate() {
            for _ in 0..k {
                poset.add_relation(v, next);
                next += 1;
            }
        }
        let mut groups: BTreeMap<Elevator, u64> = BTreeMap::new();
        for e in &self.elevators {
            *groups.entry(*e).or_default() += 1;
        }
        let sizes = groups
            .into_values()
            .chain(self.infinite_down.iter().copied())
            .chain(self.infinite_up.iter().copied())
            .filter(|&k| k > 1)
            .collect();
        (poset, sizes)
    }

    /// ν(D): markings up to interchanging indistinguishable elevators.
    pub fn markings_count(&self) -> BigUint {
        let (poset, groups) = self.marking_poset();
        let symmetry: BigUint = groups.iter().map(|&k| factorial(k)).product();
        poset.linear_extensions() / symmetry
    }

    /// Π over finite elevators of `[w]_y²`.
    pub fn refined_multiplicity(&self) -> RefinedPoly {
        self.elevators
            .iter()
            .filter(|e| e.weight > 1)
            .map(|e| {
                RefinedPoly::quantum_integer(e.weight)
                    .expect("weight >= 1")
                    .pow(2)
            })
            .product()
    }

    /// A floor-decomposed tropical curve with this diagram. Elevators are
    /// attached to each floor in a fixed order; the result is combinatorial,
    /// not an embedding.
    pub fn to_curve(&self, shape: FloorShape) -> CurveCombinatorics {
        enum Attach {
            Down(u64, Option<usize>),
            Up(u64, Option<usize>),
        }
        let n = self.n_floors as usize;
        let mut attachments: Vec<Vec<Attach>> = (0..n).map(|_| Vec::new()).collect();
        for (k, e) in self.elevators.iter().enumerate() {
            attachments[e.upper as usize - 1].push(Attach::Down(e.weight, Some(k)));
            attachments[e.lower as usize - 1].push(Attach::Up(e.weight, Some(k)));
        }
        for (v, floor) in attachments.iter_mut().enumerate() {
            for _ in 0..self.infinite_down[v] {
                floor.push(Attach::Down(1, None));
            }
            for _ in 0..self.infinite_up[v] {
                floor.push(Attach::Up(1, None));
            }
        }

        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut elevator_top: Vec<Option<u32>> = vec![None; self.elevators.len()];
        let mut elevator_bottom: Vec<Option<u32>> = vec![None; self.elevators.len()];
        for floor in &attachments {
            let mut slope = 0i64;
            let mut prev: Option<u32> = None;
            for a in floor {
                let id = vertices.len() as u32;
                vertices.push(VertexRecord { id });
                match prev {
                    None => edges.push(EdgeRecord {
                        from: id,
                        to: Endpoint::Infinity,
                        dir: [-1, -slope],
                        weight: 1,
                    }),
                    Some(p) => edges.push(EdgeRecord {
                        from: p,
                        to: Endpoint::Vertex(id),
                        dir: [1, slope],
                        weight: 1,
                    }),
                }
                match *a {
                    Attach::Down(w, k) => {
                        slope += w as i64;
                        match k {
                            Some(k) => elevator_top[k] = Some(id),
                            None => edges.push(EdgeRecord {
                                from: id,
                                to: Endpoint::Infinity,
                                dir: [0, -1],
                                weight: 1,
                            }),
                        }
                    }
                    Attach::Up(w, k) => {
                        slope -= w as i64;
                        match k {
                            Some(k) => elevator_bottom[k] = Some(id),
                            None => edges.push(EdgeRecord {
                                from: id,
                                to: Endpoint::Infinity,
                                dir: [0, 1],
                                weight: 1,
                            }),
                        }
                    }
                }
                prev = Some(id);
            }
            debug_assert_eq!(slope, shape.floor_divergence());
            if let Some(p) = prev {
                edges.push(EdgeRecord {
                    from: p,
                    to: Endpoint::Infinity,
                    dir: [1, slope],
                    weight: 1,
                });
            }
        }
        for (k, e) in self.elevators.iter().enumerate() {
            edges.push(EdgeRecord {
                from: elevator_top[k].expect("upper floor attached"),
                to: Endpoint::Vertex(elevator_bottom[k].expect("lower floor attached")),
                dir: [0, -1],
                weight: e.weight,
            });
        }
        CurveCombinatorics { vertices, edges }
    }

    fn sort_key(&self) -> (Vec<Elevator>, Vec<u64>, Vec<u64>) {
        (
            self.elevators.clone(),
            self.infinite_down.clone(),
            self.infinite_up.clone(),
        )
    }
}

struct Enumerator {
    shape: FloorShape,
    n: u32,
    target_edges: usize,
    out: Vec<FloorDiagram>,
}

struct State {
    elevators: Vec<Elevator>,
    in_weight: Vec<u64>,
    down: Vec<u64>,
    up: Vec<u64>,
    down_left: u64,
    up_left: u64,
}

impl Enumerator {
    /// Processes floor `u` (top to bottom); every floor above `u` is complete,
    /// so the weight arriving at `u` from above is known.
    fn floor(&mut self, u: u32, st: &mut State) {
        if u == 0 {
            if st.down_left == 0 && st.up_left == 0 && st.elevators.len() == self.target_edges {
                let mut elevators = st.elevators.clone();
                elevators.sort();
                let d = FloorDiagram {
                    n_floors: self.n,
                    elevators,
                    infinite_down: st.down.clone(),
                    infinite_up: st.up.clone(),
                };
                if d.is_connected() {
                    debug_assert!(d.is_valid(self.shape));
                    self.out.push(d);
                }
            }
            return;
        }
        let incoming = st.in_weight[u as usize - 1];
        let div = self.shape.floor_divergence();
        let up_choices = match self.shape {
            FloorShape::P2 { .. } => 0..=0,
            FloorShape::P1xP1 { .. } => 0..=st.up_left,
        };
        for up in up_choices {
            // out + down = in + up + div
            let budget = incoming as i64 + up as i64 + div;
            if budget < 0 {
                continue;
            }
            st.up[u as usize - 1] = up;
            st.up_left -= up;
            let mut chosen = Vec::new();
            self.elevators_from(u, 1, 1, budget as u64, &mut chosen, st);
            st.up_left += up;
            st.up[u as usize - 1] = 0;
        }
    }

    /// Chooses the multiset of elevators leaving floor `u` downwards as a
    /// non-decreasing sequence of `(lower, weight)`, then the remaining
    /// divergence becomes infinite-down elevators.
    fn elevators_from(
        &mut self,
        u: u32,
        min_lower: u32,
        min_weight: u64,
        budget: u64,
        chosen: &mut Vec<(u32, u64)>,
        st: &mut State,
    ) {
        let down = budget;
        if down <= st.down_left {
            st.down[u as usize - 1] = down;
            st.down_left -= down;
            for &(l, w) in chosen.iter() {
                st.elevators.push(Elevator {
                    lower: l,
                    upper: u,
                    weight: w,
                });
                st.in_weight[l as usize - 1] += w;
            }
            self.floor(u - 1, st);
            for &(l, w) in chosen.iter() {
                st.elevators.pop();
                st.in_weight[l as usize - 1] -= w;
            }
            st.down_left += down;
            st.down[u as usize - 1] = 0;
        }
        if st.elevators.len() + chosen.len() >= self.target_edges {
            return;
        }
        for l in min_lower..u {
            let w0 = if l == min_lower { min_weight } else { 1 };
            for w in w0..=budget {
                chosen.push((l, w));
                self.elevators_from(u, l, w, budget - w, chosen, st);
                chosen.pop();
            }
        }
    }
}

/// All floor diagrams of the given shape and genus, sorted by
/// `(elevators, infinite_down, infinite_up)`.
pub fn enumerate_diagrams(shape: FloorShape, genus: u32) -> Vec<FloorDiagram> {
    let n = shape.n_floors();
    if n == 0 {
        return Vec::new();
    }
    let mut e = Enumerator {
        shape,
        n,
        target_edges: (n - 1 + genus) as usize,
        out: Vec::new(),
    };
    let ends = shape.vertical_ends();
    let mut st = State {
        elevators: Vec::new(),
        in_weight: vec![0; n as usize],
        down: vec![0; n as usize],
        up: vec![0; n as usize],
        down_left: ends,
        up_left: if matches!(shape, FloorShape::P2 { .. }) {
            0
        } else {
            ends
        },
    };
    e.floor(n, &mut st);
    let mut out = e.out;
    out.sort_by_key(FloorDiagram::sort_key);
    out
}

/// G(g,Δ) = Σ_D ν(D) · mult(D).
pub fn compute_g_floor(shape: FloorShape, genus: u32) -> RefinedPoly {
    enumerate_diagrams(shape, genus)
        .par_iter()
        .map(|d| d.refined_multiplicity().scale(&d.markings_count()))
        .collect::<Vec<_>>()
        .into_iter()
        .sum()
}

/// ν(D) and the refined multiplicity for each diagram.
pub fn diagram_census(shape: FloorShape, genus: u32) -> Vec<(FloorDiagram, BigUint, RefinedPoly)> {
    enumerate_diagrams(shape, genus)
        .into_par_iter()
        .map(|d| {
            let nu = d.markings_count();
            let m = d.refined_multiplicity();
            (d, nu, m)
        })
        .collect()
}
