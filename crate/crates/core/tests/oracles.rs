//! Frozen values computed here from first principles, independently of the
//! library's own geometry and solvers.

mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use carpet::convergence::family_kz;
use carpet::diffusion::{crossing_steps, expected_crossing_steps, transition_operator, MeasureKind};
use carpet::geodesic::{build_skeleton, geodesic_estimate_exact};
use carpet::geometry::{cell_adjacency, estimate_c0, match_ifs, parse_rational, CellLattice, ContactKind, Rational, Side};
use carpet::network::{across_resistance, build_cell_network, effective_resistance, ConductanceScheme, SolverOptions};

use common::{exact_resistance, sc, to_f64, IntEdges};

fn q(text: &str) -> Rational {
    parse_rational(text).unwrap()
}

/// Contacts between level-one squares of side `1/k`, from the offsets alone.
fn brute_contacts(offsets: &[[Rational; 2]], k: u32) -> Vec<(usize, usize, ContactKind, Rational)> {
    let s = Rational::new(BigInt::from(1), BigInt::from(k));
    let mut out = Vec::new();
    for i in 0..offsets.len() {
        for j in i + 1..offsets.len() {
            let width = |d: usize| {
                let lo = offsets[i][d].clone().max(offsets[j][d].clone());
                let hi = (&offsets[i][d] + &s).min(&offsets[j][d] + &s);
                hi - lo
            };
            let (wx, wy) = (width(0), width(1));
            if wx.is_negative() || wy.is_negative() {
                continue;
            }
            assert!(wx.is_zero() || wy.is_zero(), "squares {i} and {j} overlap");
            let kind = if wx.is_zero() && wy.is_zero() { ContactKind::Point } else { ContactKind::Segment };
            out.push((i, j, kind, wx.max(wy)));
        }
    }
    out
}

fn library_contacts(spec: &carpet::UscSpec) -> Vec<(usize, usize, ContactKind, Rational)> {
    let lat = CellLattice::new(spec, 1).unwrap();
    let scale = Rational::from_integer(BigInt::from(lat.scale()));
    let mut v: Vec<_> = cell_adjacency(&lat)
        .iter()
        .map(|c| {
            let (a, b) = (lat.word(c.a).letters()[0] as usize, lat.word(c.b).letters()[0] as usize);
            (a.min(b), a.max(b), c.kind, Rational::from_integer(BigInt::from(c.overlap)) / &scale)
        })
        .collect();
    v.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    v
}

#[test]
fn carpet_level_one_is_a_ring_of_full_sides() {
    let spec = sc();
    let contacts = brute_contacts(spec.offsets(), 3);
    let sides: Vec<_> = contacts.iter().filter(|c| c.2 == ContactKind::Segment).collect();
    assert_eq!(sides.len(), 8);
    assert!(sides.iter().all(|c| c.3 == q("1/3")));
    // The side middles also touch diagonally at the four corners of the hole.
    let corners: Vec<_> = contacts.iter().filter(|c| c.2 == ContactKind::Point).map(|c| (c.0, c.1)).collect();
    assert_eq!(corners, vec![(1, 3), (1, 7), (3, 5), (5, 7)]);
    assert_eq!(library_contacts(&spec), contacts);
}

#[test]
fn kz_level_one_contacts_match_brute_force() {
    for z in ["0", "1/56", "1/28", "1/14"] {
        let spec = family_kz(&q(z)).unwrap();
        assert_eq!(library_contacts(&spec), brute_contacts(spec.offsets(), 7), "z = {z}");
    }
}

#[test]
fn off_grid_squares_conduct_partially() {
    let net = build_cell_network(&family_kz(&q("1/28")).unwrap(), 1, ConductanceScheme::default()).unwrap();
    assert!(net.graph().edges().iter().any(|e| e.2 > 0.0 && e.2 < 1.0));
}

#[test]
fn kz_orbit_has_eight_free_squares() {
    for z in ["1/56", "1/28", "3/56"] {
        let spec = family_kz(&q(z)).unwrap();
        let seven = Rational::from_integer(BigInt::from(7));
        let off_grid = spec.offsets().iter().filter(|o| !(&o[0] * &seven).is_integer() || !(&o[1] * &seven).is_integer()).count();
        assert_eq!((spec.n_maps(), off_grid), (32, 8), "z = {z}");
    }
}

#[test]
fn carpet_separation_at_level_one() {
    let spec = sc();
    let contacts = brute_contacts(spec.offsets(), 3);
    let mut nbrs: Vec<BTreeSet<usize>> = (0..8).map(|i| BTreeSet::from([i])).collect();
    for c in &contacts {
        nbrs[c.0].insert(c.1);
        nbrs[c.1].insert(c.0);
    }
    let third = q("1/3");
    let mut best: Option<Rational> = None;
    for i in 0..8 {
        for j in i + 1..8 {
            if !nbrs[i].is_disjoint(&nbrs[j]) {
                continue;
            }
            let gap = |d: usize| ((&spec.offsets()[i][d] - &spec.offsets()[j][d]).abs() - &third).max(Rational::zero());
            let d2 = gap(0) * gap(0) + gap(1) * gap(1);
            best = Some(best.map_or(d2.clone(), |b| b.min(d2)));
        }
    }
    // Corner cells across the hole, e.g. (0,0) and (2/3,2/3).
    assert_eq!(best.clone().unwrap(), q("2/9"));
    let est = estimate_c0(&CellLattice::new(&spec, 1).unwrap()).unwrap();
    // The estimate is reported in units of the cell side.
    assert_eq!(est.value_squared, best.unwrap() * q("9"));
}

#[test]
fn opposite_columns_are_two_parallel_paths() {
    // Merging each column leaves two paths of two unit edges.
    let ring: IntEdges = (0..8).map(|i| (i, (i + 1) % 8, 1)).collect();
    let exact = exact_resistance(8, &ring, &[0, 6, 7], &[2, 3, 4]);
    assert_eq!(exact, BigRational::from_integer(1.into()));
    let net = build_cell_network(&sc(), 1, ConductanceScheme::uniform()).unwrap();
    let lat = net.lattice();
    let r = effective_resistance(net.graph(), &lat.boundary_cells(Side::Left), &lat.boundary_cells(Side::Right), SolverOptions::default())
        .unwrap();
    assert!((r - 1.0).abs() < 1e-12);
}

/// Cells of the level-`n` standard carpet on the `3^n` grid, with unit
/// conductance across shared sides, plus the two side terminals wired with
/// conductance 2.
fn carpet_grid(n: u32) -> (usize, IntEdges, usize, usize) {
    let size = 3usize.pow(n);
    let removed = |mut i: usize, mut j: usize| {
        for _ in 0..n {
            if i % 3 == 1 && j % 3 == 1 {
                return true;
            }
            i /= 3;
            j /= 3;
        }
        false
    };
    let mut id = vec![vec![usize::MAX; size]; size];
    let mut count = 0;
    for i in 0..size {
        for j in 0..size {
            if !removed(i, j) {
                id[i][j] = count;
                count += 1;
            }
        }
    }
    let (left, right) = (count, count + 1);
    let mut edges = IntEdges::new();
    for i in 0..size {
        for j in 0..size {
            let a = id[i][j];
            if a == usize::MAX {
                continue;
            }
            if i + 1 < size && id[i + 1][j] != usize::MAX {
                edges.push((a, id[i + 1][j], 1));
            }
            if j + 1 < size && id[i][j + 1] != usize::MAX {
                edges.push((a, id[i][j + 1], 1));
            }
            if i == 0 {
                edges.push((a, left, 2));
            }
            if i == size - 1 {
                edges.push((a, right, 2));
            }
        }
    }
    (count + 2, edges, left, right)
}

#[test]
fn side_to_side_resistance_of_the_first_two_levels() {
    let mut exact = Vec::new();
    for n in 1..=2 {
        let (size, edges, l, r) = carpet_grid(n);
        let e = exact_resistance(size, &edges, &[l], &[r]);
        let net = build_cell_network(&sc(), n, ConductanceScheme::default()).unwrap();
        let got = across_resistance(&net, SolverOptions::default()).unwrap();
        assert!((got - to_f64(&e)).abs() < 1e-9 * to_f64(&e), "level {n}: {got} vs {e}");
        exact.push(e);
    }
    assert_eq!(exact[0], BigRational::new(7.into(), 5.into()));
    let ratio = to_f64(&(&exact[0] / &exact[1]));
    assert!((2.0 / 3.0..=8.0 / 9.0).contains(&ratio), "{ratio}");
}

#[test]
fn crossing_the_level_one_ring() {
    // From the left column the walk lives on the path 1-0-7-6-5 between two
    // absorbing ends, where the expected exit time from position i of 5 is i(6-i).
    let net = build_cell_network(&sc(), 1, ConductanceScheme::uniform()).unwrap();
    let lat = net.lattice();
    let (from, to) = (lat.boundary_cells(Side::Left), lat.boundary_cells(Side::Right));
    let expected = expected_crossing_steps(net.graph(), &from, &to).unwrap();
    assert!((expected - 25.0 / 3.0).abs() < 1e-9, "{expected}");
    let mc = crossing_steps(net.graph(), &from, &to, 20_000, 3).unwrap();
    assert!((mc.mean - 25.0 / 3.0).abs() <= 3.0 * mc.std_error, "{mc:?}");
}

#[test]
fn ring_walk_is_symmetric() {
    let net = build_cell_network(&sc(), 1, ConductanceScheme::uniform()).unwrap();
    let p = transition_operator(net.graph(), MeasureKind::Weighted).unwrap();
    for x in 0..8 {
        let row = p.row(x);
        assert_eq!(row.len(), 2);
        assert!(row.iter().all(|&(_, w)| w == 0.5));
    }
}

#[test]
fn opposite_corners_along_the_skeleton() {
    let sk = build_skeleton(&sc(), 3, 3).unwrap();
    let est = geodesic_estimate_exact(&sk, &[q("0"), q("0")], &[q("1"), q("1")]).unwrap();
    // Axis-parallel edges: any monotone staircase has length 2.
    assert_eq!(est.upper, 2.0);
    assert_eq!(est.lower, 2f64.sqrt());
}

#[test]
fn nested_skeletons() {
    let (coarse, fine) = (build_skeleton(&sc(), 1, 3).unwrap(), build_skeleton(&sc(), 2, 3).unwrap());
    for seg in coarse.segments() {
        for t in ["0", "1/6", "1/3", "1/2", "2/3", "5/6", "1"] {
            let t = q(t);
            let p = [&seg[0][0] + (&seg[1][0] - &seg[0][0]) * &t, &seg[0][1] + (&seg[1][1] - &seg[0][1]) * &t];
            assert!(fine.contains(&p), "{p:?}");
        }
    }
}

#[test]
fn nearby_family_members_match_closely() {
    let a = family_kz(&q("1/28")).unwrap();
    let b = family_kz(&(q("1/28") + q("1/1000"))).unwrap();
    let m = match_ifs(&a, &b).unwrap();
    assert!(m.max_distance <= 2f64.sqrt() / 1000.0 + 1e-15, "{m:?}");
}
