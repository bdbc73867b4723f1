"""Training, evaluation, and rollout harness for the bundled agents.

Three agents share one protocol: episodes end when the game ends or after
`step_cap` accepted commands, the per-episode return is the sum of score
deltas, and every run is reproducible from a single integer seed (all
randomness flows through SplitMix64, numpy is seeded from it once for
parameter init).

The relevance agent (drrn) drives several environments round-robin, picks
among detected valid actions with a softmax over Q values, and performs one
prioritized replay update per round. The template agent (tdqn) drives one
environment, assembles a command from its three heads with per-head
epsilon-greedy selection, and mixes TD learning with valid-action
supervision. The random agent issues canonical commands uniformly and
learns nothing; it exists as the floor every learner must beat.

Learning curves are CSV with header "episode,steps,return,score" where
steps is the cumulative environment step count when the episode finished.
Checkpoints are .npz archives carrying a format version, both config
blocks, the tokenizer, and every parameter tensor.
"""

from __future__ import annotations

import json
import time
from collections import deque
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from ..env import EPISODE_STEP_CAP, Environment, Handicaps
from ..gamedefs import GameDef
from ..grammar import Template, fill_template
from ..rng import SplitMix64
from .models import (ModelConfig, TokenChannels, drrn_init, drrn_loss,
                     drrn_q_values, tdqn_forward, tdqn_init, tdqn_loss)
from .nn import Adam, Params, copy_params
from .policy import (argmax_tie_break, epsilon_greedy, linear_anneal,
                     softmax_select)
from .replay import PrioritizedReplay
from .tokenizer import Tokenizer

AGENT_KINDS = ("random", "drrn", "tdqn")

# The fixed command set a no-knowledge agent samples from.
CANONICAL_ACTIONS = ("north", "south", "east", "west", "up", "down", "look",
                     "inventory", "take all", "drop", "yes")

CHECKPOINT_VERSION = 1
CURVE_HEADER = "episode,steps,return,score"

FULL_HANDICAPS = Handicaps(fixed_seed=True, load_save=True,
                           templates_vocab=True, object_tree=True,
                           valid_action_detection=True)
RANDOM_HANDICAPS = Handicaps(fixed_seed=True, load_save=False,
                             templates_vocab=False, object_tree=False,
                             valid_action_detection=False)


class CheckpointError(Exception):
    pass


@dataclass(frozen=True)
class TrainConfig:
    """Everything a training run depends on besides the game and the seed."""

    agent: str = "drrn"
    runs: int = 5
    gamma: float = 0.9
    lr: float = 1e-3
    batch_size: int = 32
    embed_dim: int = 32
    hidden_dim: int = 64
    q_hidden_dim: int = 64
    max_len: int = 32
    tau: float = 1.0
    eps_start: float = 1.0
    eps_end: float = 0.05
    eps_decay_steps: int = 3000
    lambda_mix: float = 0.5
    step_cap: int = EPISODE_STEP_CAP
    env_count: int = 8
    max_env_steps: int = 20_000
    update_every: int = 4
    updates_per_round: int = 1
    warmup: int = 64
    target_sync: int = 100
    replay_capacity: int = 100_000
    replay_alpha: float = 0.6
    replay_beta0: float = 0.4
    replay_eps: float = 1e-3
    beta_anneal_updates: int = 5000
    rolling_window: int = 100
    early_stop_score: float | None = None
    max_episode_issues: int = 5000
    max_seconds: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "TrainConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValueError(f"unknown config fields: {', '.join(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path: str) -> "TrainConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def with_overrides(self, pairs: list[str]) -> "TrainConfig":
        """Apply "key=value" strings, coercing to each field's type."""
        types = {f.name: f.type for f in fields(self)}
        updates = {}
        for pair in pairs:
            key, sep, raw = pair.partition("=")
            if not sep:
                raise ValueError(f"override '{pair}' is not key=value")
            if key not in types:
                raise ValueError(f"unknown config field '{key}'")
            updates[key] = _coerce(raw, types[key])
        return replace(self, **updates)


def _coerce(raw: str, annotation: str):
    if raw == "none":
        return None
    if "str" in annotation:
        return raw
    if "float" in annotation:
        return float(raw)
    return int(raw)


@dataclass(frozen=True)
class EpisodeRecord:
    index: int
    env_steps: int  # cumulative environment steps when the episode ended
    ret: int
    score: int
    moves: int


@dataclass
class TrainResult:
    agent: str
    config: TrainConfig
    model_config: ModelConfig | None
    params: Params | None
    tokenizer: Tokenizer | None
    episodes: list[EpisodeRecord]
    env_steps: int
    updates: int
    wall_seconds: float
    reached_step: int | None  # env steps when the early-stop target was met
    templates: tuple[str, ...] = ()
    words: tuple[str, ...] = ()
    rng_states: dict = field(default_factory=dict)

    def rolling_mean(self, window: int | None = None) -> float | None:
        window = window or self.config.rolling_window
        if not self.episodes:
            return None
        tail = self.episodes[-window:]
        return float(np.mean([e.score for e in tail]))

    def curve_text(self) -> str:
        lines = [CURVE_HEADER]
        lines += [f"{e.index},{e.env_steps},{e.ret},{e.score}"
                  for e in self.episodes]
        return "\n".join(lines) + "\n"


def write_learning_curve(path: str, result: TrainResult) -> None:
    with open(path, "wb") as fh:
        fh.write(result.curve_text().encode("utf-8"))


# -- checkpoints -------------------------------------------------------------------


def save_checkpoint(path: str, result: TrainResult,
                    adam: Adam | None = None) -> None:
    if result.params is None:
        raise CheckpointError(f"the {result.agent} agent has no parameters")
    meta = {
        "format_version": CHECKPOINT_VERSION,
        "agent": result.agent,
        "train_config": result.config.to_dict(),
        "model_config": asdict(result.model_config),
        "tokenizer_words": list(result.tokenizer.words),
        "tokenizer_max_len": result.tokenizer.max_len,
        "templates": list(result.templates),
        "words": list(result.words),
        "env_steps": result.env_steps,
        "episodes": len(result.episodes),
        "updates": result.updates,
        "rng_states": result.rng_states,
    }
    arrays = {f"p:{k}": v for k, v in result.params.items()}
    if adam is not None:
        state = adam.state()
        meta["adam"] = {k: state[k] for k in
                        ("t", "lr", "beta1", "beta2", "eps")}
        arrays.update({f"m:{k}": v for k, v in state["m"].items()})
        arrays.update({f"v:{k}": v for k, v in state["v"].items()})
    with open(path, "wb") as fh:
        np.savez(fh, meta=np.array(json.dumps(meta)), **arrays)


@dataclass
class Checkpoint:
    meta: dict
    params: Params
    adam_m: Params
    adam_v: Params

    @property
    def agent(self) -> str:
        return self.meta["agent"]

    def train_config(self) -> TrainConfig:
        return TrainConfig.from_dict(self.meta["train_config"])

    def model_config(self) -> ModelConfig:
        return ModelConfig(**self.meta["model_config"])

    def build_tokenizer(self) -> Tokenizer:
        return Tokenizer(words=tuple(self.meta["tokenizer_words"]),
                         max_len=self.meta["tokenizer_max_len"])


def load_checkpoint(path: str) -> Checkpoint:
    try:
        archive = np.load(path, allow_pickle=False)
    except (OSError, ValueError) as exc:
        raise CheckpointError(f"cannot read checkpoint '{path}': {exc}") \
            from exc
    with archive:
        if "meta" not in archive:
            raise CheckpointError("not a checkpoint: missing meta block")
        meta = json.loads(str(archive["meta"][()]))
        version = meta.get("format_version")
        if version != CHECKPOINT_VERSION:
            raise CheckpointError(
                f"unsupported checkpoint version {version!r}; "
                f"this build reads version {CHECKPOINT_VERSION}")
        params, adam_m, adam_v = {}, {}, {}
        for key in archive.files:
            if key.startswith("p:"):
                params[key[2:]] = archive[key]
            elif key.startswith("m:"):
                adam_m[key[2:]] = archive[key]
            elif key.startswith("v:"):
                adam_v[key[2:]] = archive[key]
    return Checkpoint(meta=meta, params=params, adam_m=adam_m, adam_v=adam_v)


# -- shared helpers ----------------------------------------------------------------


def _encode_obs(tokenizer: Tokenizer, env: Environment) -> TokenChannels:
    return tokenizer.encode_channels(env.observation().channels())


def _env_seed(rng: SplitMix64) -> int:
    return rng.randrange(2 ** 31)


class _RunClock:
    def __init__(self, limit: float | None) -> None:
        self.start = time.monotonic()
        self.limit = limit

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.start

    @property
    def expired(self) -> bool:
        return self.limit is not None and self.elapsed >= self.limit


class _EpisodeTracker:
    """Rolling-window bookkeeping shared by all trainers."""

    def __init__(self, cfg: TrainConfig) -> None:
        self.cfg = cfg
        self.records: list[EpisodeRecord] = []
        self.window: deque[int] = deque(maxlen=cfg.rolling_window)
        self.reached_step: int | None = None

    def finish(self, env_steps: int, ret: int, score: int,
               moves: int) -> None:
        self.records.append(EpisodeRecord(
            index=len(self.records) + 1, env_steps=env_steps, ret=ret,
            score=score, moves=moves))
        self.window.append(score)

    def target_met(self) -> bool:
        target = self.cfg.early_stop_score
        if target is None or len(self.window) < self.cfg.rolling_window:
            return False
        return float(np.mean(self.window)) >= target


# -- random agent ------------------------------------------------------------------


def run_random(game: GameDef, seed: int, episodes: int = 1,
               step_cap: int = EPISODE_STEP_CAP,
               max_env_steps: int | None = None) -> list[EpisodeRecord]:
    """Uniform canonical-command rollouts; the benchmark floor."""
    rng = SplitMix64(seed)
    env = Environment(game, RANDOM_HANDICAPS)
    records: list[EpisodeRecord] = []
    env_steps = 0
    for index in range(1, episodes + 1):
        env.reset(seed=_env_seed(rng))
        ret = 0
        issues = 0
        while not env.done and env.moves < step_cap:
            action = CANONICAL_ACTIONS[rng.randrange(len(CANONICAL_ACTIONS))]
            result = env.step(action)
            ret += result.reward
            env_steps += 1
            issues += 1
            if issues >= step_cap * 50:
                break
            if max_env_steps is not None and env_steps >= max_env_steps:
                break
        records.append(EpisodeRecord(index=index, env_steps=env_steps,
                                     ret=ret, score=env.score,
                                     moves=env.moves))
        if max_env_steps is not None and env_steps >= max_env_steps:
            break
    return records


def train_random(game: GameDef, cfg: TrainConfig, seed: int) -> TrainResult:
    """Rollout loop shaped like a training run so curves are comparable."""
    clock = _RunClock(cfg.max_seconds)
    tracker = _EpisodeTracker(cfg)
    rng = SplitMix64(seed)
    env = Environment(game, RANDOM_HANDICAPS)
    env_steps = 0
    while env_steps < cfg.max_env_steps and not clock.expired:
        env.reset(seed=_env_seed(rng))
        ret = 0
        issues = 0
        while not env.done and env.moves < cfg.step_cap:
            action = CANONICAL_ACTIONS[rng.randrange(len(CANONICAL_ACTIONS))]
            ret += env.step(action).reward
            env_steps += 1
            issues += 1
            if issues >= cfg.max_episode_issues or \
                    env_steps >= cfg.max_env_steps:
                break
        tracker.finish(env_steps, ret, env.score, env.moves)
        if tracker.target_met():
            tracker.reached_step = env_steps
            break
    return TrainResult(agent="random", config=cfg, model_config=None,
                       params=None, tokenizer=None, episodes=tracker.records,
                       env_steps=env_steps, updates=0,
                       wall_seconds=clock.elapsed,
                       reached_step=tracker.reached_step)


# -- relevance agent ---------------------------------------------------------------


@dataclass
class _DrrnSlot:
    env: Environment
    obs: TokenChannels = field(default_factory=lambda: ([], [], [], []))
    surfaces: tuple[str, ...] = ()
    act_tokens: list[list[int]] = field(default_factory=list)
    ret: int = 0


def _drrn_refresh(slot: _DrrnSlot, tokenizer: Tokenizer) -> None:
    """Point the slot at the current state's observation and action menu."""
    slot.obs = _encode_obs(tokenizer, slot.env)
    valid = slot.env.identify_valid_actions()
    if len(valid) == 0 and not slot.env.done:
        # Nothing provably changes the world here; fall back to the
        # canonical commands so the policy always has a menu.
        slot.surfaces = CANONICAL_ACTIONS
    else:
        slot.surfaces = valid.surfaces
    slot.act_tokens = [tokenizer.encode(s) for s in slot.surfaces]


def train_drrn(game: GameDef, cfg: TrainConfig, seed: int) -> TrainResult:
    clock = _RunClock(cfg.max_seconds)
    tracker = _EpisodeTracker(cfg)
    master = SplitMix64(seed)
    np_rng = np.random.default_rng(master.next_u64())
    agent_rng = master.fork()
    replay_rng = master.fork()
    seed_rng = master.fork()

    tokenizer = Tokenizer.from_game(game, cfg.max_len)
    model_cfg = ModelConfig(vocab_size=tokenizer.vocab_size,
                            embed_dim=cfg.embed_dim,
                            hidden_dim=cfg.hidden_dim,
                            q_hidden_dim=cfg.q_hidden_dim)
    params = drrn_init(np_rng, model_cfg)
    # target_sync=0 disables the frozen copy: bootstrap from live parameters
    target = copy_params(params) if cfg.target_sync else params
    opt = Adam(params, lr=cfg.lr)
    replay = PrioritizedReplay(cfg.replay_capacity, cfg.replay_alpha,
                               cfg.replay_eps)

    shared_cache: dict = {}
    slots = []
    for _ in range(cfg.env_count):
        env = Environment(game, FULL_HANDICAPS,
                          valid_action_cache=shared_cache)
        env.reset(seed=_env_seed(seed_rng))
        slot = _DrrnSlot(env=env)
        _drrn_refresh(slot, tokenizer)
        slots.append(slot)

    env_steps = 0
    updates = 0
    stop = False
    while env_steps < cfg.max_env_steps and not stop and not clock.expired:
        q_lists = drrn_q_values(params, model_cfg,
                                [s.obs for s in slots],
                                [s.act_tokens for s in slots])
        for slot, q in zip(slots, q_lists):
            choice = softmax_select(q, cfg.tau, agent_rng)
            result = slot.env.step(slot.surfaces[choice])
            env_steps += 1
            slot.ret += result.reward
            prev_obs = slot.obs
            prev_act = slot.act_tokens[choice]
            _drrn_refresh(slot, tokenizer)
            done = result.done
            replay.add({
                "obs": prev_obs,
                "act": prev_act,
                "reward": float(result.reward),
                "next_obs": slot.obs,
                "next_acts": [] if done else list(slot.act_tokens),
                "done": done,
            })
            if done or result.moves >= cfg.step_cap:
                tracker.finish(env_steps, slot.ret, slot.env.score,
                               result.moves)
                slot.env.reset(seed=_env_seed(seed_rng))
                slot.ret = 0
                _drrn_refresh(slot, tokenizer)
                if tracker.target_met():
                    tracker.reached_step = env_steps
                    stop = True
            if env_steps >= cfg.max_env_steps or stop:
                break
        if len(replay) >= max(cfg.warmup, cfg.batch_size):
            for _ in range(cfg.updates_per_round):
                beta = linear_anneal(cfg.replay_beta0, 1.0, updates,
                                     cfg.beta_anneal_updates)
                items, indices, weights = replay.sample(cfg.batch_size, beta,
                                                        replay_rng)
                batch = [dict(item, weight=w)
                         for item, w in zip(items, weights)]
                _, grads, td_abs = drrn_loss(params, target, model_cfg,
                                             batch, cfg.gamma)
                opt.step(params, grads)
                replay.update_priorities(indices, td_abs)
                updates += 1
                if cfg.target_sync and updates % cfg.target_sync == 0:
                    target = copy_params(params)
    return TrainResult(agent="drrn", config=cfg, model_config=model_cfg,
                       params=params, tokenizer=tokenizer,
                       episodes=tracker.records, env_steps=env_steps,
                       updates=updates, wall_seconds=clock.elapsed,
                       reached_step=tracker.reached_step,
                       rng_states={"agent": agent_rng.state,
                                   "replay": replay_rng.state,
                                   "seed": seed_rng.state})


# -- template agent ----------------------------------------------------------------


def _tdqn_valid_sets(env: Environment, t_index: dict[str, int],
                     w_index: dict[str, int]
                     ) -> tuple[tuple[int, ...], tuple[int, ...],
                                tuple[int, ...]]:
    valid = env.identify_valid_actions()
    t_ids, o1_ids, o2_ids = set(), set(), set()
    for cand in valid:
        t_ids.add(t_index[cand.template.surface])
        if len(cand.fillers) >= 1 and cand.fillers[0] in w_index:
            o1_ids.add(w_index[cand.fillers[0]])
        if len(cand.fillers) >= 2 and cand.fillers[1] in w_index:
            o2_ids.add(w_index[cand.fillers[1]])
    return tuple(sorted(t_ids)), tuple(sorted(o1_ids)), tuple(sorted(o2_ids))


def _tdqn_pick(q_rows: tuple[np.ndarray, np.ndarray, np.ndarray],
               templates: tuple[Template, ...], words: tuple[str, ...],
               eps: float, rng: SplitMix64) -> tuple[tuple[int, int, int],
                                                     str]:
    q_t, q_o1, q_o2 = q_rows
    t_idx = epsilon_greedy(q_t, eps, rng)
    template = templates[t_idx]
    w1_idx = w2_idx = -1
    fillers: list[str] = []
    if template.blanks >= 1:
        w1_idx = epsilon_greedy(q_o1, eps, rng)
        fillers.append(words[w1_idx])
    if template.blanks >= 2:
        w2_idx = epsilon_greedy(q_o2, eps, rng)
        fillers.append(words[w2_idx])
    return (t_idx, w1_idx, w2_idx), fill_template(template, *fillers).surface


def train_tdqn(game: GameDef, cfg: TrainConfig, seed: int) -> TrainResult:
    clock = _RunClock(cfg.max_seconds)
    tracker = _EpisodeTracker(cfg)
    master = SplitMix64(seed)
    np_rng = np.random.default_rng(master.next_u64())
    agent_rng = master.fork()
    replay_rng = master.fork()
    seed_rng = master.fork()

    tokenizer = Tokenizer.from_game(game, cfg.max_len)
    templates = game.templates()
    words = game.vocabulary().words
    t_index = {tpl.surface: i for i, tpl in enumerate(templates)}
    w_index = {w: i for i, w in enumerate(words)}
    model_cfg = ModelConfig(vocab_size=tokenizer.vocab_size,
                            embed_dim=cfg.embed_dim,
                            hidden_dim=cfg.hidden_dim,
                            q_hidden_dim=cfg.q_hidden_dim)
    params = tdqn_init(np_rng, model_cfg, len(templates), len(words))
    target = copy_params(params) if cfg.target_sync else params
    opt = Adam(params, lr=cfg.lr)
    replay = PrioritizedReplay(cfg.replay_capacity, cfg.replay_alpha,
                               cfg.replay_eps)

    env = Environment(game, FULL_HANDICAPS)
    env.reset(seed=_env_seed(seed_rng))
    obs = _encode_obs(tokenizer, env)
    valid_sets = _tdqn_valid_sets(env, t_index, w_index)
    ret = 0
    issues = 0

    env_steps = 0
    updates = 0
    stop = False
    while env_steps < cfg.max_env_steps and not stop and not clock.expired:
        q_t, q_o1, q_o2, _ = tdqn_forward(params, model_cfg, [obs])
        eps = linear_anneal(cfg.eps_start, cfg.eps_end, env_steps,
                            cfg.eps_decay_steps)
        taken, surface = _tdqn_pick((q_t[0], q_o1[0], q_o2[0]), templates,
                                    words, eps, agent_rng)
        result = env.step(surface)
        env_steps += 1
        issues += 1
        ret += result.reward
        next_obs = _encode_obs(tokenizer, env)
        replay.add({
            "obs": obs,
            "taken": taken,
            "reward": float(result.reward),
            "next_obs": next_obs,
            "done": result.done,
            "valid_t": valid_sets[0],
            "valid_o1": valid_sets[1],
            "valid_o2": valid_sets[2],
        })
        if result.done or result.moves >= cfg.step_cap or \
                issues >= cfg.max_episode_issues:
            tracker.finish(env_steps, ret, env.score, result.moves)
            env.reset(seed=_env_seed(seed_rng))
            obs = _encode_obs(tokenizer, env)
            valid_sets = _tdqn_valid_sets(env, t_index, w_index)
            ret = 0
            issues = 0
            if tracker.target_met():
                tracker.reached_step = env_steps
                stop = True
        else:
            obs = next_obs
            valid_sets = _tdqn_valid_sets(env, t_index, w_index)
        if len(replay) >= max(cfg.warmup, cfg.batch_size) and \
                env_steps % cfg.update_every == 0:
            beta = linear_anneal(cfg.replay_beta0, 1.0, updates,
                                 cfg.beta_anneal_updates)
            items, indices, weights = replay.sample(cfg.batch_size, beta,
                                                    replay_rng)
            batch = [dict(item, weight=w) for item, w in zip(items, weights)]
            _, _, _, grads, td_abs = tdqn_loss(params, target, model_cfg,
                                               batch, cfg.gamma,
                                               cfg.lambda_mix)
            opt.step(params, grads)
            replay.update_priorities(indices, td_abs)
            updates += 1
            if cfg.target_sync and updates % cfg.target_sync == 0:
                target = copy_params(params)
    return TrainResult(agent="tdqn", config=cfg, model_config=model_cfg,
                       params=params, tokenizer=tokenizer,
                       episodes=tracker.records, env_steps=env_steps,
                       updates=updates, wall_seconds=clock.elapsed,
                       reached_step=tracker.reached_step,
                       templates=tuple(t.surface for t in templates),
                       words=words,
                       rng_states={"agent": agent_rng.state,
                                   "replay": replay_rng.state,
                                   "seed": seed_rng.state})


def train(game: GameDef, cfg: TrainConfig, seed: int) -> TrainResult:
    if cfg.agent == "drrn":
        return train_drrn(game, cfg, seed)
    if cfg.agent == "tdqn":
        return train_tdqn(game, cfg, seed)
    if cfg.agent == "random":
        return train_random(game, cfg, seed)
    raise ValueError(f"unknown agent '{cfg.agent}'; "
                     f"expected one of {AGENT_KINDS}")


# -- evaluation --------------------------------------------------------------------


def evaluate(game: GameDef, result: TrainResult, seed: int,
             episodes: int = 10) -> list[EpisodeRecord]:
    """Greedy rollouts of a trained policy (epsilon-greedy for tdqn)."""
    cfg = result.config
    rng = SplitMix64(seed)
    records: list[EpisodeRecord] = []
    if result.agent == "random":
        return run_random(game, seed, episodes=episodes,
                          step_cap=cfg.step_cap)
    env = Environment(game, FULL_HANDICAPS)
    env_steps = 0
    for index in range(1, episodes + 1):
        env.reset(seed=_env_seed(rng))
        ret = 0
        issues = 0
        while not env.done and env.moves < cfg.step_cap:
            obs = _encode_obs(result.tokenizer, env)
            if result.agent == "drrn":
                valid = env.identify_valid_actions()
                surfaces = valid.surfaces if len(valid) else CANONICAL_ACTIONS
                tokens = [result.tokenizer.encode(s) for s in surfaces]
                q = drrn_q_values(result.params, result.model_config,
                                  [obs], [tokens])[0]
                surface = surfaces[argmax_tie_break(q, rng)]
            else:
                templates = game.templates()
                words = game.vocabulary().words
                q_t, q_o1, q_o2, _ = tdqn_forward(result.params,
                                                  result.model_config, [obs])
                _, surface = _tdqn_pick((q_t[0], q_o1[0], q_o2[0]),
                                        templates, words, cfg.eps_end, rng)
            step = env.step(surface)
            ret += step.reward
            env_steps += 1
            issues += 1
            if issues >= cfg.max_episode_issues:
                break
        records.append(EpisodeRecord(index=index, env_steps=env_steps,
                                     ret=ret, score=env.score,
                                     moves=env.moves))
    return records


def result_from_checkpoint(game: GameDef, checkpoint: Checkpoint
                           ) -> TrainResult:
    """Rebuild enough of a TrainResult to evaluate a stored policy."""
    cfg = checkpoint.train_config()
    return TrainResult(agent=checkpoint.agent, config=cfg,
                       model_config=checkpoint.model_config(),
                       params=checkpoint.params,
                       tokenizer=checkpoint.build_tokenizer(),
                       episodes=[], env_steps=checkpoint.meta["env_steps"],
                       updates=checkpoint.meta["updates"], wall_seconds=0.0,
                       reached_step=None,
                       templates=tuple(checkpoint.meta["templates"]),
                       words=tuple(checkpoint.meta["words"]))
