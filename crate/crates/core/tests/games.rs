//! Game-solver tests: ranking laws, cross-solver agreement, strategy
//! verification, and the experiment arenas.

use fgltl_core::automata::{build_dgrw, GrpCondition, GrpPair, WaitingVector};
use fgltl_core::bench::{gen_appendix_arena, gen_random_game};
use fgltl_core::games::{
    game_product, is_good, lift, min_increase, next_wf, rank_greater, solve_ltl_game,
    solve_ranking, solve_symbolic, verify_strategy, Game, GrpGame, Player, RankValue, Ranking,
    Strategy, Winner,
};
use fgltl_core::ltl::{parse_any_atoms, Formula, Letter};
use fgltl_core::util::BitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grp(game: Game, pairs: Vec<(Vec<usize>, Vec<Vec<usize>>)>) -> GrpGame {
    let n = game.vertex_count();
    GrpGame {
        game,
        condition: GrpCondition {
            pairs: pairs
                .into_iter()
                .map(|(f, isets)| GrpPair {
                    fset: BitSet::from_iter(n, f),
                    isets: isets
                        .into_iter()
                        .map(|i| BitSet::from_iter(n, i))
                        .collect(),
                })
                .collect(),
        },
    }
}

fn single_vertex(owner: Player) -> Game {
    Game {
        owner: vec![owner],
        edges: vec![vec![0]],
        labels: vec![Letter::from_names(["a"])],
        initial: 0,
    }
}

/// Seeded random GRP game for the agreement corpus.
fn random_grp_game(seed: u64, n: usize, k: usize) -> GrpGame {
    let game = gen_random_game(seed, n, 0, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x5851_f42d_4c95_7f2d));
    let pairs = (0..k)
        .map(|_| {
            let fset: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.2)).collect();
            let iset_count = rng.gen_range(1..=2);
            let isets: Vec<Vec<usize>> = (0..iset_count)
                .map(|_| (0..n).filter(|_| rng.gen_bool(0.4)).collect())
                .collect();
            (fset, isets)
        })
        .collect();
    grp(game, pairs)
}

#[test]
fn trivially_winning_and_losing_single_vertices() {
    // player-0 self-loop with pair (empty, {{v}}): always winning
    let g = grp(single_vertex(Player::Zero), vec![(vec![], vec![vec![0]])]);
    let sol = solve_ranking(&g).unwrap();
    assert!(sol.winning.contains(0));
    assert!(verify_strategy(&g, &sol.strategy));
    // player-1 self-loop inside the avoid set: always losing
    let g = grp(single_vertex(Player::One), vec![(vec![0], vec![vec![0]])]);
    let sol = solve_ranking(&g).unwrap();
    assert!(!sol.winning.contains(0));
    assert!(solve_symbolic(&g).is_empty());
}

#[test]
fn ltl_game_on_self_loop() {
    let f = parse_any_atoms("G F a").unwrap();
    for owner in [Player::Zero, Player::One] {
        let out = solve_ltl_game(&single_vertex(owner), &f).unwrap();
        assert_eq!(out.winner, Winner::Player0);
        assert_eq!(out.grp_game.vertex_count(), 1);
    }
}

#[test]
fn product_with_trivial_automaton_is_isomorphic() {
    let arena = gen_appendix_arena(1).unwrap();
    let a = build_dgrw(&Formula::tt()).unwrap();
    let g = game_product(&arena.game, &a);
    assert_eq!(g.vertex_count(), arena.game.vertex_count());
    // everything is winning under (empty, {Q})
    let sol = solve_ranking(&g).unwrap();
    assert_eq!(sol.winning.count(), g.vertex_count());
}

#[test]
fn waiting_vector_updates() {
    let g = grp(
        single_vertex(Player::Zero),
        vec![(vec![], vec![vec![0], vec![]]), (vec![], vec![vec![]])],
    );
    // pair 0 has two Buechi sets; vertex 0 is in I_0^1 only
    let wf = WaitingVector::initial(2);
    let next = next_wf(&g, 0, &wf);
    assert_eq!(next.get(0), 2); // advanced
    assert_eq!(next.get(1), 1); // untouched
    let wrapped = next_wf(&g, 0, &next);
    // vertex 0 not in I_0^2, so the counter stays
    assert_eq!(wrapped.get(0), 2);
}

#[test]
fn wrap_around_on_last_set() {
    let g = grp(
        single_vertex(Player::Zero),
        vec![(vec![], vec![vec![0], vec![0]])],
    );
    let wf = WaitingVector::initial(1);
    let w2 = next_wf(&g, 0, &wf);
    assert_eq!(w2.get(0), 2);
    let w3 = next_wf(&g, 0, &w2);
    assert_eq!(w3.get(0), 1); // cyclic
}

/// All finite ranks for `k` pairs with weights bounded by `n`, sorted.
fn all_ranks(k: usize, n: u32) -> Vec<RankValue> {
    fn perms(items: Vec<u8>) -> Vec<Vec<u8>> {
        if items.is_empty() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for (i, &x) in items.iter().enumerate() {
            let mut rest = items.clone();
            rest.remove(i);
            for mut tail in perms(rest) {
                tail.insert(0, x);
                out.push(tail);
            }
        }
        out
    }
    let mut out = Vec::new();
    for perm in perms((1..=k as u8).collect()) {
        let mut weights = vec![0u32; k + 1];
        loop {
            out.push(RankValue::Finite {
                perm: perm.iter().copied().collect(),
                weights: weights.iter().copied().collect(),
            });
            let mut i = k + 1;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if weights[i] < n {
                    weights[i] += 1;
                    break;
                }
                weights[i] = 0;
            }
            if weights.iter().all(|w| *w == 0) {
                break;
            }
        }
    }
    out.sort();
    out
}

#[test]
fn min_increase_matches_exhaustive_enumeration() {
    // k <= 2, n <= 3 per the documented validation bound
    for seed in 0..12u64 {
        for k in 1..=2usize {
            let n = 3usize;
            let g = random_grp_game(seed, n, k);
            let ranks = all_ranks(k, n as u32);
            let lens = g.iset_lens();
            for wf in WaitingVector::enumerate(&lens) {
                for v in 0..n {
                    for y in ranks.iter().chain([&RankValue::Infinite]) {
                        let constructed = min_increase(&g, n as u32, v, &wf, y);
                        let brute = ranks
                            .iter()
                            .find(|x| rank_greater(&g, v, &wf, x, y))
                            .cloned()
                            .unwrap_or(RankValue::Infinite);
                        assert_eq!(
                            constructed, brute,
                            "seed {seed} k {k} v {v} wf {wf} y {y}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn lift_is_monotone_and_inflationary() {
    for seed in 0..8u64 {
        let g = random_grp_game(seed, 4, 2);
        let lens = g.iset_lens();
        let wfs = WaitingVector::enumerate(&lens);
        let nb = wfs.len();
        let sol = solve_ranking(&g).unwrap();
        // at the fixpoint, lifting changes nothing and every value dominates
        // its own start
        for v in 0..4 {
            for wfi in 0..nb {
                let lifted = lift(&g, &sol.ranking, v, wfi);
                assert_eq!(&lifted, sol.ranking.get(v, wfi), "fixpoint stable");
                assert!(*sol.ranking.get(v, wfi) >= RankValue::bottom(2));
            }
        }
    }
}

#[test]
fn worklist_equals_round_robin() {
    for seed in 0..10u64 {
        let g = random_grp_game(seed, 5, 2);
        let sol = solve_ranking(&g).unwrap();
        let rr = round_robin(&g);
        assert_eq!(sol.ranking.values, rr.values, "seed {seed}");
    }
}

fn round_robin(g: &GrpGame) -> Ranking {
    let lens = g.iset_lens();
    let wfs = WaitingVector::enumerate(&lens);
    let nb = wfs.len();
    let n = g.vertex_count();
    let mut r = Ranking {
        wfs,
        values: vec![RankValue::bottom(g.pair_count()); n * nb],
    };
    loop {
        let mut changed = false;
        for v in 0..n {
            for wfi in 0..nb {
                let new = lift(g, &r, v, wfi);
                if new > *r.get(v, wfi) {
                    r.values[v * nb + wfi] = new;
                    changed = true;
                }
            }
        }
        if !changed {
            return r;
        }
    }
}

#[test]
fn solver_agreement_goodness_and_strategies_on_random_corpus() {
    let mut checked = 0;
    for seed in 0..40u64 {
        for (n, k) in [(5usize, 1usize), (6, 2), (8, 2), (6, 3)] {
            let g = random_grp_game(seed.wrapping_add(n as u64 * 31 + k as u64), n, k);
            let sol = solve_ranking(&g).unwrap();
            let sym = solve_symbolic(&g);
            assert_eq!(sol.winning, sym, "winning sets agree (n={n}, k={k}, seed={seed})");
            assert!(is_good(&g, &sol.ranking), "fixpoint ranking is good");
            assert!(verify_strategy(&g, &sol.strategy), "extracted strategy verifies");
            // termination bound |V| * |B| * |R|
            let b: u64 = g.iset_lens().iter().map(|&l| l as u64).product();
            let fact: u64 = (1..=k as u64).product();
            let r_size = fact * ((n as u64 + 1).pow(k as u32 + 1)) + 1;
            assert!(sol.lift_count <= (n as u64) * b * r_size);
            checked += 1;
        }
    }
    assert!(checked >= 100);
}

#[test]
fn strategy_into_avoid_set_fails_verification() {
    // two player-0 vertices: 0 inside F with a self-loop, 1 outside
    let game = Game {
        owner: vec![Player::Zero, Player::Zero],
        edges: vec![vec![0, 1], vec![1]],
        labels: vec![Letter::empty(), Letter::empty()],
        initial: 0,
    };
    let g = grp(game, vec![(vec![0], vec![vec![0, 1]])]);
    let bad = Strategy {
        wfs: vec![WaitingVector::initial(1)],
        choice: vec![0, usize::MAX],
        starts: vec![(0, WaitingVector::initial(1))],
    };
    assert!(!verify_strategy(&g, &bad));
    let good = Strategy {
        wfs: vec![WaitingVector::initial(1)],
        choice: vec![1, 1],
        starts: vec![(0, WaitingVector::initial(1))],
    };
    assert!(verify_strategy(&g, &good));
}

#[test]
fn trivial_pair_strategy_always_verifies() {
    for seed in 0..5u64 {
        let game = gen_random_game(seed, 6, 0, 3).unwrap();
        let n = game.vertex_count();
        let g = grp(game, vec![(vec![], vec![(0..n).collect()])]);
        let sol = solve_ranking(&g).unwrap();
        assert_eq!(sol.winning.count(), n);
        assert!(verify_strategy(&g, &sol.strategy));
    }
}

#[test]
fn experiment_arena_with_recurrence_disjunction() {
    let f = parse_any_atoms("(G F a & G F b & G F c) | (G F !a & G F !b & G F !c)").unwrap();
    let arena = gen_appendix_arena(1).unwrap();
    let out = solve_ltl_game(&arena.game, &f).unwrap();
    assert_eq!(out.winner, Winner::Player0);
    let grp_game = &out.grp_game;
    let sol = solve_ranking(grp_game).unwrap();
    assert_eq!(sol.winning, solve_symbolic(grp_game));
    assert!(verify_strategy(grp_game, &sol.strategy));
}

/// Degeneralizing the game (copies indexed by waiting vectors, plain pairs)
/// and solving with the same machinery gives the same winner.
#[test]
fn degeneralized_game_consistency() {
    for seed in 0..12u64 {
        let g = random_grp_game(seed, 5, 2);
        let sol = solve_ranking(&g).unwrap();
        let (dg, init) = degeneralize_game(&g);
        let dsol = solve_ranking(&dg).unwrap();
        assert_eq!(
            sol.winning.contains(g.game.initial),
            dsol.winning.contains(init),
            "seed {seed}"
        );
    }
}

fn degeneralize_game(g: &GrpGame) -> (GrpGame, usize) {
    let lens = g.iset_lens();
    let wfs = WaitingVector::enumerate(&lens);
    let nb = wfs.len();
    let n = g.vertex_count();
    let node = |v: usize, wfi: usize| v * nb + wfi;
    let mut owner = Vec::with_capacity(n * nb);
    let mut edges = Vec::with_capacity(n * nb);
    let mut labels = Vec::with_capacity(n * nb);
    for v in 0..n {
        for wfi in 0..nb {
            owner.push(g.game.owner[v]);
            labels.push(g.game.labels[v].clone());
            let wf2 = next_wf(g, v, &wfs[wfi]);
            let wf2i = wfs.iter().position(|w| *w == wf2).unwrap();
            edges.push(g.game.edges[v].iter().map(|&w| node(w, wf2i)).collect());
        }
    }
    let pairs = (0..g.pair_count())
        .map(|i| {
            let li = lens[i];
            let mut fset = BitSet::new(n * nb);
            let mut iset = BitSet::new(n * nb);
            for v in 0..n {
                for (wfi, wf) in wfs.iter().enumerate() {
                    if g.in_f(i, v) {
                        fset.insert(node(v, wfi));
                    }
                    if wf.get(i) == li && g.in_i(i, li - 1, v) {
                        iset.insert(node(v, wfi));
                    }
                }
            }
            GrpPair {
                fset,
                isets: vec![iset],
            }
        })
        .collect();
    let init = node(g.game.initial, 0);
    (
        GrpGame {
            game: Game {
                owner,
                edges,
                labels,
                initial: init,
            },
            condition: GrpCondition { pairs },
        },
        init,
    )
}

/// Exhaustive enumeration of memory-B strategies on tiny games: the winning
/// set of the solvers must be exactly the vertices from which some strategy
/// verifies.
#[test]
fn determinacy_on_tiny_games() {
    for seed in 0..10u64 {
        let g = random_grp_game(seed, 4, 1);
        let sol = solve_ranking(&g).unwrap();
        let lens = g.iset_lens();
        let wfs = WaitingVector::enumerate(&lens);
        let nb = wfs.len();
        let n = g.vertex_count();

        // enumerate all choice maps over player-0 (vertex, memory) slots
        let slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|v| (0..nb).map(move |wfi| (v, wfi)))
            .filter(|&(v, _)| g.game.owner[v] == Player::Zero)
            .collect();
        let mut counts = 1usize;
        for &(v, _) in &slots {
            counts = counts.saturating_mul(g.game.edges[v].len());
        }
        if counts > 100_000 {
            continue;
        }
        for v0 in 0..n {
            let mut winnable = false;
            'outer: for combo in 0..counts {
                let mut c = combo;
                let mut choice = vec![usize::MAX; n * nb];
                for &(v, wfi) in &slots {
                    let deg = g.game.edges[v].len();
                    choice[v * nb + wfi] = g.game.edges[v][c % deg];
                    c /= deg;
                }
                for wf0 in &wfs {
                    let s = Strategy {
                        wfs: wfs.clone(),
                        choice: choice.clone(),
                        starts: vec![(v0, wf0.clone())],
                    };
                    if verify_strategy(&g, &s) {
                        winnable = true;
                        break 'outer;
                    }
                }
            }
            assert_eq!(
                winnable,
                sol.winning.contains(v0),
                "determinacy at vertex {v0}, seed {seed}"
            );
        }
    }
}
