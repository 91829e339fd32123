use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{classical_success, parity, BitString, Channel, Decoder, Game};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Local,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Self::Exhaustive),
            "local" => Ok(Self::Local),
            other => Err(Error::Unsupported(format!("search mode `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterministicStrategy {
    n: usize,
    message_count: usize,
    /// encode[x] for x in numeric order.
    encode: Vec<usize>,
    decoder: Decoder,
}

impl DeterministicStrategy {
    pub fn new(n: usize, message_count: usize, encode: Vec<usize>, decoder: Decoder) -> Result<Self> {
        if encode.len() != 1 << n {
            return Err(Error::InvalidChannel(format!(
                "encoding covers {} inputs, expected {}",
                encode.len(),
                1usize << n
            )));
        }
        if encode.iter().any(|&m| m >= message_count) {
            return Err(Error::InvalidChannel("message label out of range".into()));
        }
        if decoder.n() != n || decoder.message_count() != message_count {
            return Err(Error::InvalidDecoder("decoder shape does not match encoding".into()));
        }
        Ok(Self { n, message_count, encode, decoder })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn message_count(&self) -> usize {
        self.message_count
    }

    pub fn encode(&self, x: BitString) -> usize {
        self.encode[x.index()]
    }

    pub fn encoding(&self) -> &[usize] {
        &self.encode
    }

    pub fn decoder(&self) -> &Decoder {
        &self.decoder
    }

    pub fn channel(&self) -> Channel<Rational64> {
        Channel::deterministic(self.n, self.message_count, |x| self.encode[x.index()])
            .expect("validated encoding")
    }

    pub fn value(&self, game: &Game) -> Result<Rational64> {
        classical_success(&self.channel(), &self.decoder, game)
    }

    /// Preimages as lists of input strings, one per message label.
    pub fn preimages(&self) -> Vec<Vec<BitString>> {
        let mut out = vec![Vec::new(); self.message_count];
        for x in BitString::all(self.n) {
            out[self.encode[x.index()]].push(x);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub best: DeterministicStrategy,
    pub value: Rational64,
    /// Encodings (exhaustive) or moves (local) examined.
    pub evaluated: u64,
}

/// Per-(m,y) majority vote over the preimage of m, ties to 0.
pub fn majority_decoder(n: usize, message_count: usize, encode: &[usize]) -> Decoder {
    let mut ones = vec![vec![0usize; n]; message_count];
    let mut size = vec![0usize; message_count];
    for x in BitString::all(n) {
        let m = encode[x.index()];
        size[m] += 1;
        for y in 1..=n {
            ones[m][y - 1] += x.bit(y) as usize;
        }
    }
    Decoder::from_fn(n, message_count, |m, y| (2 * ones[m][y - 1] > size[m]) as u8)
        .expect("well-formed table")
}

/// Send the first g−1 bits, guess 0 on the rest.
pub fn forwarding_strategy(game: &Game) -> DeterministicStrategy {
    let (n, k) = (game.n(), game.g() - 1);
    let message_count = 1 << k;
    let encode: Vec<usize> = game.inputs().map(|x| (x.value() >> (n - k)) as usize).collect();
    let decoder = Decoder::from_fn(n, message_count, |m, y| {
        if y <= k {
            ((m >> (k - y)) & 1) as u8
        } else {
            0
        }
    })
    .expect("well-formed table");
    DeterministicStrategy::new(n, message_count, encode, decoder).expect("valid forwarding strategy")
}

/// Incremental bookkeeping for balance and majority score.
struct Tally {
    n: usize,
    parity_masks: Vec<u64>,
    parity_count: usize,
    size: Vec<usize>,
    odd: Vec<Vec<usize>>,
    ones: Vec<Vec<usize>>,
}

impl Tally {
    fn new(game: &Game, message_count: usize) -> Self {
        let elems = game.parity_set().elements();
        let parity_masks = game
            .inputs()
            .map(|x| {
                elems.iter().enumerate().fold(0u64, |acc, (k, s)| {
                    acc | ((parity(s, &x).expect("same length") as u64) << k)
                })
            })
            .collect();
        Self {
            n: game.n(),
            parity_masks,
            parity_count: elems.len(),
            size: vec![0; message_count],
            odd: vec![vec![0; elems.len()]; message_count],
            ones: vec![vec![0; game.n()]; message_count],
        }
    }

    fn reset(&mut self, encode: &[usize]) {
        for m in 0..self.size.len() {
            self.size[m] = 0;
            self.odd[m].iter_mut().for_each(|c| *c = 0);
            self.ones[m].iter_mut().for_each(|c| *c = 0);
        }
        for (x, &m) in encode.iter().enumerate() {
            self.apply(x, m, true);
        }
    }

    fn apply(&mut self, x: usize, m: usize, add: bool) {
        let mask = self.parity_masks[x];
        let step = |c: &mut usize| if add { *c += 1 } else { *c -= 1 };
        step(&mut self.size[m]);
        for k in 0..self.parity_count {
            if mask >> k & 1 == 1 {
                step(&mut self.odd[m][k]);
            }
        }
        for y in 0..self.n {
            if x >> (self.n - 1 - y) & 1 == 1 {
                step(&mut self.ones[m][y]);
            }
        }
    }

    fn balanced(&self, m: usize) -> bool {
        self.odd[m].iter().all(|&o| 2 * o == self.size[m])
    }

    fn all_balanced(&self) -> bool {
        (0..self.size.len()).all(|m| self.balanced(m))
    }

    /// Σ_m Σ_y max(#zeros, #ones).
    fn score(&self) -> usize {
        (0..self.size.len())
            .map(|m| {
                self.ones[m]
                    .iter()
                    .map(|&c| c.max(self.size[m] - c))
                    .sum::<usize>()
            })
            .sum()
    }
}

fn finish(game: &Game, message_count: usize, encode: Vec<usize>, score: usize, evaluated: u64) -> SearchOutcome {
    let decoder = majority_decoder(game.n(), message_count, &encode);
    let best = DeterministicStrategy::new(game.n(), message_count, encode, decoder)
        .expect("search produces valid strategies");
    let value = Rational64::new(score as i64, (game.input_count() * game.n()) as i64);
    debug_assert_eq!(best.value(game).unwrap(), value);
    SearchOutcome { best, value, evaluated }
}

/// Best deterministic strategy whose every message preimage is balanced
/// for every parity element.
pub fn search_po_deterministic(
    game: &Game,
    mode: SearchMode,
    budget: u64,
    seed: u64,
) -> Result<SearchOutcome> {
    match mode {
        SearchMode::Exhaustive => exhaustive(game),
        SearchMode::Local => Ok(local(game, budget, seed)),
    }
}

fn exhaustive(game: &Game) -> Result<SearchOutcome> {
    if game.n() > 3 {
        return Err(Error::SearchTooLarge(game.n()));
    }
    let inputs = game.input_count();
    let labels = inputs / 2;
    let mut tally = Tally::new(game, labels);
    let mut encode = vec![0usize; inputs];
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut evaluated = 0u64;
    loop {
        evaluated += 1;
        tally.reset(&encode);
        if tally.all_balanced() {
            let score = tally.score();
            if best.as_ref().is_none_or(|(b, _)| score > *b) {
                best = Some((score, encode.clone()));
            }
        }
        // Odometer with x = 0 most significant, giving lexicographic order.
        let mut pos = inputs;
        loop {
            if pos == 0 {
                let (score, enc) = best.expect("constant encoding is balanced");
                return Ok(finish(game, labels, enc, score, evaluated));
            }
            pos -= 1;
            encode[pos] += 1;
            if encode[pos] < labels {
                break;
            }
            encode[pos] = 0;
        }
    }
}

const RESTART_LEN: u64 = 2_000;
const WALK_LEN: u64 = 64;

fn local(game: &Game, budget: u64, seed: u64) -> SearchOutcome {
    let inputs = game.input_count();
    let labels = inputs / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::new(game, labels);
    let mut best_encode = vec![0usize; inputs];
    tally.reset(&best_encode);
    let mut best_score = tally.score();
    let mut steps = 0u64;

    while steps < budget {
        let mut encode = vec![0usize; inputs];
        tally.reset(&encode);
        let mut score = tally.score();
        let len = RESTART_LEN.min(budget - steps);
        for t in 0..len {
            steps += 1;
            let Some(undo) = random_move(&mut rng, &mut encode, &mut tally, labels) else {
                continue;
            };
            let new_score = tally.score();
            if t < WALK_LEN || new_score >= score {
                score = new_score;
            } else {
                for &(x, from, to) in undo.iter().rev() {
                    tally.apply(x, to, false);
                    tally.apply(x, from, true);
                    encode[x] = from;
                }
                continue;
            }
            if score > best_score || (score == best_score && encode < best_encode) {
                debug_assert!(tally.all_balanced());
                best_score = score;
                best_encode = encode.clone();
            }
        }
    }
    finish(game, labels, best_encode, best_score, steps)
}

/// Applies a random balance-preserving move, returning (x, from, to) records.
fn random_move(
    rng: &mut ChaCha8Rng,
    encode: &mut [usize],
    tally: &mut Tally,
    labels: usize,
) -> Option<Vec<(usize, usize, usize)>> {
    let inputs = encode.len();
    let mut moves = Vec::new();
    if rng.random_bool(0.5) {
        let x = rng.random_range(0..inputs);
        let from = encode[x];
        let mut to = rng.random_range(0..labels - 1);
        if to >= from {
            to += 1;
        }
        let subset: Vec<usize> = (0..inputs)
            .filter(|&z| encode[z] == from && (z == x || rng.random_bool(0.5)))
            .collect();
        for &z in &subset {
            tally.apply(z, from, false);
            tally.apply(z, to, true);
            encode[z] = to;
            moves.push((z, from, to));
        }
        if !(tally.balanced(from) && tally.balanced(to)) {
            undo(encode, tally, &moves);
            return None;
        }
    } else {
        let a = rng.random_range(0..inputs);
        let b = rng.random_range(0..inputs);
        let (ma, mb) = (encode[a], encode[b]);
        if ma == mb || tally.parity_masks[a] != tally.parity_masks[b] {
            return None;
        }
        for (z, from, to) in [(a, ma, mb), (b, mb, ma)] {
            tally.apply(z, from, false);
            tally.apply(z, to, true);
            encode[z] = to;
            moves.push((z, from, to));
        }
    }
    Some(moves)
}

fn undo(encode: &mut [usize], tally: &mut Tally, moves: &[(usize, usize, usize)]) {
    for &(z, from, to) in moves.iter().rev() {
        tally.apply(z, to, false);
        tally.apply(z, from, true);
        encode[z] = from;
    }
}
