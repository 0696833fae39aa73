use rand::Rng;

use super::{GameState, LabMove, Player, Run};

/// For each `who`-move of `run`, how many adversary moves precede it.
fn adversary_counts(run: &[LabMove], who: Player) -> Vec<usize> {
    let mut seen = 0;
    let mut out = Vec::new();
    for m in run {
        if m.player == who {
            out.push(seen);
        } else {
            seen += 1;
        }
    }
    out
}

/// Every `who`-delay of `run`: interleavings keeping both players'
/// subsequences in which no `who`-move overtakes an adversary move it used to
/// follow. Includes `run` itself.
pub fn delays(run: &[LabMove], who: Player) -> Vec<Vec<LabMove>> {
    let mine: Vec<&LabMove> = run.iter().filter(|m| m.player == who).collect();
    let theirs: Vec<&LabMove> = run.iter().filter(|m| m.player != who).collect();
    let need = adversary_counts(run, who);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(run.len());
    fn go(
        i: usize,
        j: usize,
        mine: &[&LabMove],
        theirs: &[&LabMove],
        need: &[usize],
        cur: &mut Vec<LabMove>,
        out: &mut Vec<Vec<LabMove>>,
    ) {
        if i == mine.len() && j == theirs.len() {
            out.push(cur.clone());
            return;
        }
        if i < mine.len() && j >= need[i] {
            cur.push(mine[i].clone());
            go(i + 1, j, mine, theirs, need, cur, out);
            cur.pop();
        }
        if j < theirs.len() {
            cur.push(theirs[j].clone());
            go(i, j + 1, mine, theirs, need, cur, out);
            cur.pop();
        }
    }
    go(0, 0, &mine, &theirs, &need, &mut cur, &mut out);
    out
}

/// Whether `delta` is a `who`-delay of `gamma`.
pub fn is_delay(gamma: &[LabMove], delta: &[LabMove], who: Player) -> bool {
    let sub = |r: &[LabMove], p: bool| -> Vec<LabMove> {
        r.iter()
            .filter(|m| (m.player == who) == p)
            .cloned()
            .collect()
    };
    sub(gamma, true) == sub(delta, true)
        && sub(gamma, false) == sub(delta, false)
        && adversary_counts(gamma, who)
            .iter()
            .zip(adversary_counts(delta, who))
            .all(|(&before, after)| after >= before)
}

/// A random legal run from `state`: at each point either player may move,
/// and play stops at random or when nobody can move.
pub fn random_run(state: &GameState, rng: &mut impl Rng) -> Run {
    let mut run = Vec::new();
    let mut cur = state.clone();
    loop {
        let options: Vec<LabMove> = [Player::Machine, Player::Environment]
            .into_iter()
            .flat_map(|p| {
                cur.legal_moves(p)
                    .into_iter()
                    .map(move |t| LabMove::new(p, t))
            })
            .collect();
        if options.is_empty() || rng.gen_bool(0.15) {
            return run;
        }
        let m = options[rng.gen_range(0..options.len())].clone();
        cur = cur.apply_move(&m).expect("legal by construction");
        run.push(m);
    }
}

/// Samples `samples` (run, delay) pairs: a random legal run, then a random
/// delay of the winner's moves. Returns the pairs whose winner differs.
pub fn static_violations(state: &GameState, samples: usize, rng: &mut impl Rng) -> Vec<(Run, Run)> {
    let mut bad = Vec::new();
    for _ in 0..samples {
        let run = random_run(state, rng);
        let w = state.wn_run(&run);
        let all = delays(&run, w);
        let delta = all[rng.gen_range(0..all.len())].clone();
        if state.wn_run(&delta) != w {
            bad.push((run, delta));
        }
    }
    bad
}
