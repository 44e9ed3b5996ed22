use oddfan::generators::fan_graph;
use oddfan::generators::FanShape;
use oddfan::invariants::independence_number;
use oddfan::oracle::{exact_ex, exact_rt, graph_from_code, naive_contains, Search};

const TABLE: &str = include_str!("../data/oracle_reference.tsv");

struct Row {
    n: usize,
    shape: FanShape,
    alpha_cap: Option<usize>,
    value: Option<(usize, u64)>,
}

fn rows() -> Vec<Row> {
    TABLE
        .lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split('\t').collect();
            let value = match f[4] {
                "infeasible" => None,
                v => Some((v.parse().unwrap(), f[5].parse().unwrap())),
            };
            Row {
                n: f[0].parse().unwrap(),
                shape: FanShape::new(f[1].parse().unwrap(), f[2].parse().unwrap()).unwrap(),
                alpha_cap: f[3].parse().ok(),
                value,
            }
        })
        .collect()
}

fn compute(row: &Row, search: Search) -> Option<(usize, u64)> {
    let v = match row.alpha_cap {
        None => Some(exact_ex(row.n, row.shape, search).unwrap()),
        Some(cap) => exact_rt(row.n, row.shape, cap, search).unwrap(),
    };
    v.map(|v| (v.edges, v.witness_code))
}

#[test]
fn reference_values_reproduce() {
    for row in rows() {
        assert_eq!(
            compute(&row, Search::default()),
            row.value,
            "n={} {:?} cap={:?}",
            row.n,
            row.shape,
            row.alpha_cap
        );
    }
}

#[test]
fn isomorphism_filter_reproduces_small_rows() {
    for row in rows().into_iter().filter(|r| r.n <= 6) {
        assert_eq!(compute(&row, Search::Exhaustive { iso_filter: true }), row.value);
    }
}

#[test]
fn reference_witnesses_are_admissible() {
    for row in rows() {
        let Some((edges, code)) = row.value else { continue };
        let w = graph_from_code(row.n, code);
        assert_eq!(w.size(), edges);
        assert!(!naive_contains(&w, &fan_graph(row.shape).graph));
        if let Some(cap) = row.alpha_cap {
            assert!(independence_number(&w) <= cap);
        }
    }
}

#[test]
fn extremal_numbers_grow_with_order() {
    let shape = FanShape::new(1, 3).unwrap();
    let values: Vec<usize> = (1..=6)
        .map(|n| exact_ex(n, shape, Search::default()).unwrap().edges)
        .collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]), "{values:?}");
}

#[test]
fn uncapped_rt_equals_ex() {
    for n in 2..=6 {
        for shape in [FanShape::new(1, 3).unwrap(), FanShape::new(2, 3).unwrap()] {
            let ex = exact_ex(n, shape, Search::default()).unwrap();
            assert_eq!(exact_rt(n, shape, n, Search::default()).unwrap(), Some(ex));
        }
    }
}
