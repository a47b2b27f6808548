use coulomb_shift::peterson::{dim_cell, is_p_allowed, peterson_data, virtual_dimension};
use coulomb_shift::roots::RootDatum;

/// Adjoint-type datum of a Cartan matrix: simple roots are the unit
/// vectors and the coroots are read off the columns.
fn from_cartan(a: &[[i64; 2]; 2]) -> RootDatum {
    RootDatum::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![a[0][0], a[1][0]], vec![a[0][1], a[1][1]]]).unwrap()
}

fn data() -> Vec<(&'static str, RootDatum)> {
    vec![
        ("sl2", RootDatum::sl2()),
        ("gl2", RootDatum::gl2()),
        ("sl3", RootDatum::sl3()),
        ("gl3", RootDatum::gln(3)),
        ("gl4", RootDatum::gln(4)),
        ("b2", from_cartan(&[[2, -2], [-1, 2]])),
        ("g2", from_cartan(&[[2, -1], [-3, 2]])),
    ]
}

fn box_points(n: usize, b: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (-b..=b).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn bound(d: &RootDatum) -> i64 {
    if d.rank() > 3 {
        1
    } else {
        3
    }
}

#[test]
fn weyl_group_orders() {
    let orders: Vec<usize> = data().iter().map(|(_, d)| d.weyl().len()).collect();
    assert_eq!(orders, vec![2, 2, 6, 6, 24, 8, 12]);
}

#[test]
fn length_counts_inversions() {
    for (name, d) in data() {
        for e in d.weyl() {
            let inversions = d
                .positive_roots()
                .iter()
                .filter(|a| e.act_root(a).iter().any(|c| *c < 0))
                .count();
            assert_eq!(e.length(), inversions, "{name} {:?}", e.word);
        }
    }
}

#[test]
fn antidominant_is_orbit_invariant() {
    for (name, d) in data() {
        for lambda in box_points(d.rank(), bound(&d)) {
            let (minus, w) = d.antidominant(&lambda).unwrap();
            assert!(d.is_antidominant(&minus));
            assert_eq!(d.element(w).act(&minus), lambda, "{name}");
            for e in d.weyl() {
                assert_eq!(d.antidominant(&e.act(&lambda)).unwrap().0, minus, "{name} {lambda:?}");
            }
        }
    }
}

// w_lambda is the longest element sending lambda^- to lambda.
#[test]
fn w_lambda_matches_brute_force() {
    for (name, d) in data() {
        for lambda in box_points(d.rank(), bound(&d)) {
            let (minus, w) = d.antidominant(&lambda).unwrap();
            let longest = (0..d.weyl().len())
                .filter(|&u| d.element(u).act(&minus) == lambda)
                .max_by_key(|&u| d.element(u).length())
                .unwrap();
            assert_eq!(w, longest, "{name} {lambda:?}");
        }
    }
}

#[test]
fn dominance_is_a_partial_order() {
    for (name, d) in data().into_iter().filter(|(_, d)| d.rank() <= 3) {
        let dom: Vec<Vec<i64>> = box_points(d.rank(), 2).into_iter().filter(|l| d.is_dominant(l)).collect();
        let leq = |a: &Vec<i64>, b: &Vec<i64>| d.dominance_leq(a, b).unwrap();
        for a in &dom {
            assert!(leq(a, a));
            for b in &dom {
                if a != b && leq(a, b) {
                    assert!(!leq(b, a), "{name} {a:?} {b:?}");
                }
                for c in &dom {
                    if leq(a, b) && leq(b, c) {
                        assert!(leq(a, c), "{name} {a:?} {b:?} {c:?}");
                    }
                }
            }
            // Only mu^+ matters.
            for e in d.weyl() {
                for b in &dom {
                    assert_eq!(leq(&e.act(a), b), leq(a, b));
                }
            }
        }
    }
}

#[test]
fn borel_quotient_is_trivial() {
    for (name, d) in data() {
        assert!(d.pi1_parabolic(&d.borel()).is_identity(), "{name}");
    }
}

#[test]
fn schubert_index_is_minimal_coset_representative() {
    for (name, d) in data() {
        for p in d.all_parabolics() {
            for w in 0..d.weyl().len() {
                let best = p
                    .weyl
                    .iter()
                    .map(|&u| d.mul(w, u))
                    .min_by_key(|&v| d.element(v).length())
                    .unwrap();
                assert_eq!(d.coset_data(&p, w).0, best, "{name} {:?}", p.subset);
            }
        }
    }
}

#[test]
fn allowed_classes_have_zero_virtual_dimension() {
    for (name, d) in data() {
        for p in d.all_parabolics() {
            for lambda in box_points(d.rank(), bound(&d)) {
                if is_p_allowed(&d, &lambda, &p).unwrap() {
                    assert_eq!(virtual_dimension(&d, &lambda, &p).unwrap(), 0, "{name} {lambda:?} {:?}", p.subset);
                }
            }
        }
    }
}

#[test]
fn borel_images_are_distinct() {
    for (name, d) in data() {
        let b = d.borel();
        let mut seen = std::collections::HashSet::new();
        for lambda in box_points(d.rank(), bound(&d)) {
            let pd = peterson_data(&d, &lambda, &b).unwrap();
            assert!(seen.insert((pd.novikov.clone(), pd.schubert)), "{name} {lambda:?}");
        }
    }
}

/// Length of the shortest element of `t_lambda W` in the affine Weyl group:
/// positive affine roots `beta + n delta` made negative by `t_lambda w`,
/// with `t_lambda(beta + n delta) = beta + (n + <beta, lambda>) delta`.
fn affine_length(d: &RootDatum, lambda: &[i64]) -> i64 {
    let window = d.positive_roots().iter().map(|a| d.pair_root(a, lambda).abs()).max().unwrap_or(0) + 2;
    let mut roots: Vec<Vec<i64>> = d.positive_roots().to_vec();
    roots.extend(d.positive_roots().iter().map(|a| a.iter().map(|c| -c).collect()));
    let positive = |r: &[i64]| r.iter().all(|c| *c >= 0);
    d.weyl()
        .iter()
        .map(|w| {
            let mut count = 0;
            for beta in &roots {
                let image = w.act_root(beta);
                let shift = d.pair_root(&image, lambda);
                let first = if positive(beta) { 0 } else { 1 };
                for n in first..=window {
                    let m = n + shift;
                    if (positive(&image) && m < 0) || (!positive(&image) && m <= 0) {
                        count += 1;
                    }
                }
            }
            count
        })
        .min()
        .unwrap()
}

#[test]
fn cells_match_affine_lengths() {
    for (name, d) in data() {
        for lambda in box_points(d.rank(), if d.rank() > 3 { 1 } else { 2 }) {
            assert_eq!(dim_cell(&d, &lambda).unwrap(), affine_length(&d, &lambda), "{name} {lambda:?}");
        }
    }
}
