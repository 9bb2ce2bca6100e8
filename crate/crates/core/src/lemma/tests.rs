use super::*;
use crate::census::enumerate_labeled_digraphs;
use crate::digraph::{generate, validate_cover_tour, Family};
use crate::engine::last_visit_row;
use crate::rational::ratio;
use crate::sample::strongly_connected_family;

use NoRevisitReading::{CoverTour as Tour, EndsAtV};

fn hanging_leaf() -> Digraph {
    Digraph::from_arcs(4, [(0, 1), (1, 0), (0, 2), (2, 0), (3, 2), (2, 3), (3, 0)]).unwrap()
}

fn strongly_connected(n: usize) -> Vec<Digraph> {
    enumerate_labeled_digraphs(n)
        .unwrap()
        .filter(Digraph::is_strongly_connected)
        .collect()
}

#[derive(Clone, Copy)]
enum Kind {
    NoRevisit(NoRevisitReading),
    AnyCoverTour,
}

// Depth-first enumeration of every walk from `u` of at most `max_len` arcs,
// in lexicographic order; returns the shortest one satisfying the predicate
// (lexicographically smallest among those).
fn brute_force(g: &Digraph, u: usize, v: usize, kind: Kind, max_len: usize) -> Option<Vec<usize>> {
    fn accept(g: &Digraph, u: usize, v: usize, w: &[usize], kind: Kind) -> bool {
        match kind {
            Kind::NoRevisit(r) => is_no_revisit_walk(g, u, v, w, r),
            Kind::AnyCoverTour => validate_cover_tour(g, w) && w.last() == Some(&v),
        }
    }
    fn go(
        g: &Digraph,
        u: usize,
        v: usize,
        kind: Kind,
        walk: &mut Vec<usize>,
        limit: &mut usize,
        best: &mut Option<Vec<usize>>,
    ) {
        if accept(g, u, v, walk, kind) && best.as_ref().is_none_or(|b| walk.len() < b.len()) {
            *limit = walk.len() - 1;
            *best = Some(walk.clone());
        }
        if walk.len() - 1 >= *limit {
            return;
        }
        for &t in g.out_neighbors(*walk.last().unwrap()) {
            walk.push(t);
            go(g, u, v, kind, walk, limit, best);
            walk.pop();
        }
    }
    let mut best = None;
    let mut limit = max_len;
    go(g, u, v, kind, &mut vec![u], &mut limit, &mut best);
    best
}

#[test]
fn search_matches_brute_force() {
    const MAX_LEN: usize = 8;
    let mut graphs = strongly_connected(3);
    graphs.extend(strongly_connected_family(4, 60, 11).unwrap());
    let mut compared = 0;
    for g in &graphs {
        for u in 0..g.n() {
            for v in (0..g.n()).filter(|&v| v != u) {
                for reading in [EndsAtV, Tour] {
                    let found = exists_covertour_no_revisit(g, u, v, reading).unwrap();
                    let brute = brute_force(g, u, v, Kind::NoRevisit(reading), MAX_LEN);
                    match &found {
                        Some(w) if w.len() <= MAX_LEN => {
                            assert_eq!(Some(w.vertices().to_vec()), brute, "{g:?} {u} {v}");
                        }
                        Some(w) => assert!(is_no_revisit_walk(g, u, v, w.vertices(), reading)),
                        None => assert_eq!(brute, None, "{g:?} {u} {v} {reading:?}"),
                    }
                    compared += 1;
                }
                let brute = brute_force(g, u, v, Kind::AnyCoverTour, MAX_LEN);
                match shortest_cover_tour(g, u, v).unwrap() {
                    Some(t) if t.len() <= MAX_LEN => {
                        assert_eq!(Some(t.vertices().to_vec()), brute, "{g:?} {u} {v}");
                    }
                    Some(_) => {}
                    None => assert_eq!(brute, None, "{g:?} {u} {v}"),
                }
            }
        }
    }
    assert!(compared > 1000);
}

#[test]
fn no_revisit_examples() {
    let d3 = generate(Family::DirectedCycle, 3).unwrap();
    for reading in [EndsAtV, Tour] {
        let w = exists_covertour_no_revisit(&d3, 0, 2, reading).unwrap().unwrap();
        assert_eq!(w.vertices(), &[0, 1, 2]);
        assert_eq!(exists_covertour_no_revisit(&hanging_leaf(), 0, 3, reading).unwrap(), None);
        let p3 = generate(Family::Path, 3).unwrap();
        assert_eq!(exists_covertour_no_revisit(&p3, 1, 2, reading).unwrap(), None);
    }
    assert!(matches!(exists_covertour_no_revisit(&d3, 1, 1, Tour), Err(Error::Argument(_))));
}

#[test]
fn readings_differ_on_cycles() {
    // Around the far side, fetch 1 and come back: ends at 2 without
    // revisiting 0, but 2 is not the last new vertex.
    let c5 = generate(Family::Cycle, 5).unwrap();
    let w = exists_covertour_no_revisit(&c5, 0, 2, EndsAtV).unwrap().unwrap();
    assert_eq!(w.vertices(), &[0, 4, 3, 2, 1, 2]);
    assert_eq!(exists_covertour_no_revisit(&c5, 0, 2, Tour).unwrap(), None);
}

#[test]
fn literal_reading_breaks_strictness() {
    let g = Digraph::from_arcs(4, [(0, 2), (2, 1), (1, 3), (3, 1), (3, 0)]).unwrap();
    let w = exists_covertour_no_revisit(&g, 0, 1, EndsAtV).unwrap().unwrap();
    assert_eq!(w.vertices(), &[0, 2, 1, 3, 1]);
    assert_eq!(exists_covertour_no_revisit(&g, 0, 1, Tour).unwrap(), None);
    let w = lemma1_witness(&g, 0, 1).unwrap();
    assert_eq!((w.x, w.strict), (2, false));
    assert_eq!(w.p_xv, w.p_uv);
    assert_eq!(w.p_uv, ratio(0, 1));
}

#[test]
fn shortest_tour_examples() {
    let d3 = generate(Family::DirectedCycle, 3).unwrap();
    assert_eq!(shortest_cover_tour(&d3, 0, 2).unwrap().unwrap().vertices(), &[0, 1, 2]);
    let p3 = generate(Family::Path, 3).unwrap();
    assert_eq!(shortest_cover_tour(&p3, 1, 2).unwrap().unwrap().vertices(), &[1, 0, 1, 2]);
    let c4 = generate(Family::Cycle, 4).unwrap();
    assert_eq!(shortest_cover_tour(&c4, 0, 2).unwrap().unwrap().vertices(), &[0, 1, 0, 3, 2]);
    assert_eq!(shortest_cover_tour(&c4, 0, 1).unwrap().unwrap().vertices(), &[0, 3, 2, 1]);
    assert_eq!(
        shortest_cover_tour(&hanging_leaf(), 0, 3).unwrap().unwrap().vertices(),
        &[0, 1, 0, 2, 3]
    );
    // The middle of a path is never last.
    assert_eq!(shortest_cover_tour(&p3, 0, 1).unwrap(), None);
    let weak = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
    assert_eq!(shortest_cover_tour(&weak, 0, 2).unwrap_err(), Error::NotStronglyConnected);
}

#[test]
fn minimal_tours_of_c4() {
    let c4 = generate(Family::Cycle, 4).unwrap();
    let tours: Vec<Vec<usize>> = minimal_cover_tours(&c4, 0, 2)
        .unwrap()
        .into_iter()
        .map(|t| t.vertices().to_vec())
        .collect();
    assert_eq!(tours, vec![vec![0, 1, 0, 3, 2], vec![0, 3, 0, 1, 2]]);
}

#[test]
fn minimal_tours_all_have_minimal_length() {
    for g in strongly_connected_family(5, 10, 3).unwrap() {
        for v in 1..5 {
            let tours = minimal_cover_tours(&g, 0, v).unwrap();
            let Some(best) = shortest_cover_tour(&g, 0, v).unwrap() else {
                assert!(tours.is_empty());
                continue;
            };
            assert_eq!(tours[0], best);
            assert!(tours.iter().all(|t| t.len() == best.len() && t.last() == v));
            assert!(tours.windows(2).all(|p| p[0].vertices() < p[1].vertices()));
        }
    }
}

#[test]
fn revisit_consequence_examples() {
    let c4 = generate(Family::Cycle, 4).unwrap();
    assert!(check_revisit_consequence(&c4, 0, 1).unwrap());
    assert!(check_revisit_consequence(&c4, 0, 2).unwrap());
    let k3 = generate(Family::Complete, 3).unwrap();
    assert!(check_revisit_consequence(&k3, 0, 2).unwrap());
    let p3 = generate(Family::Path, 3).unwrap();
    assert!(matches!(check_revisit_consequence(&p3, 0, 2), Err(Error::Hypothesis(_))));
}

#[test]
fn revisit_consequence_on_uniform_families() {
    for n in 3..=6 {
        for kind in [Family::Cycle, Family::Complete] {
            let g = generate(kind, n).unwrap();
            for v in 1..n {
                assert!(check_revisit_consequence(&g, 0, v).unwrap(), "{kind} {n} {v}");
            }
        }
    }
}

#[test]
fn eq1_examples() {
    let d3 = generate(Family::DirectedCycle, 3).unwrap();
    let c = check_eq1(&d3, 0, 2).unwrap();
    assert_eq!(c.degree, 1);
    assert_eq!(c.terms, vec![Eq1Term { x: 1, last_at_v: ratio(0, 1), last_two_vu: ratio(1, 1) }]);
    assert_eq!((c.lhs.clone(), c.residual.clone()), (ratio(1, 1), ratio(0, 1)));

    let p3 = generate(Family::Path, 3).unwrap();
    let c = check_eq1(&p3, 0, 2).unwrap();
    assert!(c.holds());
    assert_eq!(c.lhs, ratio(1, 1));

    let c4 = generate(Family::Cycle, 4).unwrap();
    let c = check_eq1(&c4, 0, 2).unwrap();
    assert!(c.holds());
    assert_eq!(c.lhs, ratio(1, 3));
}

#[test]
fn eq1_errors() {
    let c4 = generate(Family::Cycle, 4).unwrap();
    assert!(matches!(check_eq1(&c4, 0, 1), Err(Error::Hypothesis(_))));
    assert!(matches!(check_eq1(&c4, 2, 2), Err(Error::Argument(_))));
    assert!(matches!(check_eq1(&c4, 0, 9), Err(Error::VertexOutOfRange { .. })));
    let weak = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
    assert_eq!(check_eq1(&weak, 0, 2).unwrap_err(), Error::NotStronglyConnected);
    let k2 = generate(Family::Complete, 2).unwrap();
    assert!(matches!(check_eq1(&k2, 0, 1), Err(Error::Argument(_))));
}

#[test]
fn witness_examples() {
    let d3 = generate(Family::DirectedCycle, 3).unwrap();
    let w = lemma1_witness(&d3, 0, 2).unwrap();
    assert_eq!((w.x, w.strict), (1, true));
    assert_eq!((w.p_xv, w.p_uv), (ratio(0, 1), ratio(1, 1)));

    let p3 = generate(Family::Path, 3).unwrap();
    let w = lemma1_witness(&p3, 0, 2).unwrap();
    assert_eq!((w.x, w.strict), (1, true));
    assert_eq!(w.witness.unwrap().vertices(), &[0, 1, 2]);
    assert_eq!((w.p_xv, w.p_uv), (ratio(1, 2), ratio(1, 1)));

    let c5 = generate(Family::Cycle, 5).unwrap();
    let w = lemma1_witness(&c5, 0, 2).unwrap();
    assert!(w.p_xv <= ratio(1, 4));
}

#[test]
fn lemma_holds_exhaustively_on_three_vertices_and_sampled_larger() {
    let mut graphs = strongly_connected(3);
    graphs.extend(strongly_connected_family(4, 40, 5).unwrap());
    graphs.extend(strongly_connected_family(5, 10, 6).unwrap());
    for g in &graphs {
        let ctx = LemmaContext::new(g).unwrap();
        for (u, v) in ctx.nonadjacent_pairs() {
            assert!(ctx.eq1(u, v).unwrap().holds(), "{g:?} {u} {v}");
            let w = ctx.witness(u, v).unwrap();
            let mean = g
                .out_neighbors(u)
                .iter()
                .fold(Rational::zero(), |a, &x| a + ctx.last_visit(x, v))
                / Rational::from_integer(g.out_degree(u).into());
            assert!(mean <= w.p_uv);
            if let Some(walk) = &w.witness {
                assert!(is_no_revisit_walk(g, u, v, walk.vertices(), Tour));
            }
        }
    }
}

#[test]
fn context_matches_engine() {
    let g = hanging_leaf();
    let ctx = LemmaContext::new(&g).unwrap();
    for u in 0..4 {
        let row = last_visit_row(&g, u).unwrap();
        for v in 0..4 {
            assert_eq!(ctx.last_visit(u, v), &row[v]);
        }
    }
}

#[test]
fn exploratory_report_runs() {
    let c5 = generate(Family::Cycle, 5).unwrap();
    let ctx = LemmaContext::new(&c5).unwrap();
    let r = exploratory_report(&ctx).unwrap();
    assert_eq!(r.adjacent.len(), 10);
    assert_eq!(r.pairs_compared, 10);
    assert!(r
        .reading_disagreements
        .iter()
        .any(|d| (d.u, d.v) == (0, 2) && d.ends_at_v && !d.cover_tour && !d.strict_inequality));
}

#[test]
fn reports_serialize() {
    let d3 = generate(Family::DirectedCycle, 3).unwrap();
    let json = serde_json::to_value(lemma1_witness(&d3, 0, 2).unwrap()).unwrap();
    assert_eq!(json["p_uv"], "1");
    assert_eq!(json["witness"], serde_json::json!([0, 1, 2]));
    let json = serde_json::to_value(check_eq1(&d3, 0, 2).unwrap()).unwrap();
    assert_eq!(json["residual"], "0");
    assert_eq!(json["terms"][0]["last_two_vu"], "1");
}
