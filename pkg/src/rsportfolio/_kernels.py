"""numba kernels shared by the rules, belief and player modules.

Boards are flat ``int8`` arrays of length ``size*size``: 0 empty, 1 Black,
2 White, point index ``row*size + col``. Neighbour tables come from
:func:`neighbour_tables`; ``-1`` marks off-board entries. A pass is ``-1``.

Return codes of :func:`play`: ``>= 0`` number of stones captured,
``OCCUPIED``, ``SUICIDE`` or ``KO`` when the move is rejected (board untouched).
"""

from functools import lru_cache

import numpy as np
from numba import njit

from .prng import nb_uniform_below

EMPTY, BLACK, WHITE = 0, 1, 2
PASS = -1
OCCUPIED, SUICIDE, KO = -1, -2, -3

# resampling attempts before a determinization is relaxed
DETERMINIZE_ATTEMPTS = 50


@lru_cache(maxsize=None)
def neighbour_tables(size: int) -> tuple[np.ndarray, np.ndarray]:
    npts = size * size
    orth = np.full((npts, 4), -1, dtype=np.int32)
    diag = np.full((npts, 4), -1, dtype=np.int32)
    for r in range(size):
        for c in range(size):
            p = r * size + c
            for d, (dr, dc) in enumerate(((-1, 0), (1, 0), (0, -1), (0, 1))):
                rr, cc = r + dr, c + dc
                if 0 <= rr < size and 0 <= cc < size:
                    orth[p, d] = rr * size + cc
            for d, (dr, dc) in enumerate(((-1, -1), (-1, 1), (1, -1), (1, 1))):
                rr, cc = r + dr, c + dc
                if 0 <= rr < size and 0 <= cc < size:
                    diag[p, d] = rr * size + cc
    orth.setflags(write=False)
    diag.setflags(write=False)
    return orth, diag


@njit(cache=True)
def flood_chain(board, orth, p, chain, visited):
    """Collect the chain through ``p`` into ``chain``; marks ``visited``.

    Returns ``(length, has_liberty)``. Callers clear ``visited`` afterwards.
    """
    color = board[p]
    chain[0] = p
    visited[p] = True
    k = 1
    head = 0
    lib = False
    while head < k:
        q = chain[head]
        head += 1
        for d in range(4):
            r = orth[q, d]
            if r < 0:
                continue
            v = board[r]
            if v == 0:
                lib = True
            elif v == color and not visited[r]:
                visited[r] = True
                chain[k] = r
                k += 1
    return k, lib


@njit(cache=True)
def _has_other_liberty(board, orth, q, p, stack, visited):
    """True if the chain through ``q`` has a liberty other than ``p``."""
    color = board[q]
    stack[0] = q
    visited[q] = True
    k = 1
    head = 0
    found = False
    while head < k and not found:
        s = stack[head]
        head += 1
        for d in range(4):
            r = orth[s, d]
            if r < 0:
                continue
            v = board[r]
            if v == 0:
                if r != p:
                    found = True
                    break
            elif v == color and not visited[r]:
                visited[r] = True
                stack[k] = r
                k += 1
    for i in range(k):
        visited[stack[i]] = False
    return found


@njit(cache=True)
def play(board, orth, color, p, ko, captured, chain, visited):
    """Place ``color`` at ``p`` in place. Returns ``(code, new_ko)``."""
    if board[p] != 0:
        return OCCUPIED, ko
    if p == ko:
        return KO, ko
    opp = 3 - color
    breathes = False
    kills = False
    own_neighbour = False
    for d in range(4):
        q = orth[p, d]
        if q < 0:
            continue
        v = board[q]
        if v == 0:
            breathes = True
        elif v == opp:
            if not kills and not _has_other_liberty(board, orth, q, p, chain, visited):
                kills = True
        else:
            own_neighbour = True
            if not breathes and _has_other_liberty(board, orth, q, p, chain, visited):
                breathes = True
    if not (breathes or kills):
        return SUICIDE, ko
    board[p] = color
    ncap = 0
    if kills:
        for d in range(4):
            q = orth[p, d]
            if q < 0 or board[q] != opp:
                continue
            k, lib = flood_chain(board, orth, q, chain, visited)
            for i in range(k):
                visited[chain[i]] = False
            if not lib:
                for i in range(k):
                    board[chain[i]] = 0
                    captured[ncap] = chain[i]
                    ncap += 1
    new_ko = -1
    if ncap == 1 and not own_neighbour:
        libs = 0
        for d in range(4):
            q = orth[p, d]
            if q >= 0 and board[q] == 0:
                libs += 1
        if libs == 1:
            new_ko = captured[0]
    return ncap, new_ko


@njit(cache=True)
def is_eyelike(board, orth, diag, color, p):
    for d in range(4):
        q = orth[p, d]
        if q >= 0 and board[q] != color:
            return False
    opp = 3 - color
    bad = 0
    edge = False
    for d in range(4):
        q = diag[p, d]
        if q < 0:
            edge = True
        elif board[q] == opp:
            bad += 1
    if edge:
        return bad == 0
    return bad <= 1


@njit(cache=True)
def area_score(board, orth):
    npts = board.shape[0]
    seen = np.zeros(npts, dtype=np.bool_)
    region = np.empty(npts, dtype=np.int32)
    black = 0
    white = 0
    for p in range(npts):
        v = board[p]
        if v == 1:
            black += 1
        elif v == 2:
            white += 1
        elif not seen[p]:
            seen[p] = True
            region[0] = p
            k = 1
            head = 0
            border = 0
            while head < k:
                q = region[head]
                head += 1
                for d in range(4):
                    r = orth[q, d]
                    if r < 0:
                        continue
                    w = board[r]
                    if w == 0:
                        if not seen[r]:
                            seen[r] = True
                            region[k] = r
                            k += 1
                    else:
                        border |= w
            if border == 1:
                black += k
            elif border == 2:
                white += k
    return black, white


@njit(cache=True)
def winner_of(board, orth, komi):
    b, w = area_score(board, orth)
    return 1 if b - w > komi else 2


@njit(cache=True)
def playout(board, orth, diag, to_move, ko, passes, cap, komi, rng, log):
    """Uniform random playout in place; returns the winner (1 or 2).

    Each turn draws uniformly among the not-yet-rejected empty points,
    rejecting eyelike or illegal ones, and passes when none remain. The
    empty-point list keeps its order between turns (rejected points are
    swapped to the back), which the transcript depends on. When ``log`` has
    room, moves are recorded (``-1`` for a pass) and ``log[-1]`` holds the
    move count.
    """
    npts = board.shape[0]
    empties = np.empty(npts, dtype=np.int32)
    captured = np.empty(npts, dtype=np.int32)
    chain = np.empty(npts, dtype=np.int32)
    visited = np.zeros(npts, dtype=np.bool_)
    nempty = 0
    for p in range(npts):
        if board[p] == 0:
            empties[nempty] = p
            nempty += 1
    color = to_move
    moves = 0
    while passes < 2 and moves < cap:
        m = nempty
        played = -1
        while m > 0:
            k = nb_uniform_below(rng, m)
            p = empties[k]
            if not is_eyelike(board, orth, diag, color, p):
                code, nk = play(board, orth, color, p, ko, captured, chain, visited)
                if code >= 0:
                    ko = nk
                    played = p
                    # drop p from the empty list, then append captures
                    nempty -= 1
                    last = empties[nempty]
                    empties[k] = last
                    for i in range(code):
                        q = captured[i]
                        empties[nempty] = q
                        nempty += 1
                    break
            m -= 1
            other = empties[m]
            empties[m] = p
            empties[k] = other
        if played >= 0:
            passes = 0
        else:
            passes += 1
            ko = -1
        if moves < log.shape[0] - 1:
            log[moves] = played
        moves += 1
        color = 3 - color
    if log.shape[0] > 0:
        log[log.shape[0] - 1] = moves
    return winner_of(board, orth, komi)


@njit(cache=True)
def _all_chains_alive(board, orth, chain, visited):
    alive = True
    for p in range(board.shape[0]):
        if board[p] != 0 and not visited[p]:
            k, lib = flood_chain(board, orth, p, chain, visited)
            if not lib:
                alive = False
                break
    visited[:] = False
    return alive


@njit(cache=True)
def _relax(board, orth, me, chain, visited):
    """Delete zero-liberty opponent chains, then free any suffocated own chain."""
    opp = 3 - me
    npts = board.shape[0]
    dead = np.zeros(npts, dtype=np.bool_)
    for p in range(npts):
        if board[p] == opp and not visited[p]:
            k, lib = flood_chain(board, orth, p, chain, visited)
            if not lib:
                for i in range(k):
                    dead[chain[i]] = True
    visited[:] = False
    for p in range(npts):
        if dead[p]:
            board[p] = 0
    for p in range(npts):
        if board[p] == me and not visited[p]:
            k, lib = flood_chain(board, orth, p, chain, visited)
            if not lib:
                for i in range(k):
                    q = chain[i]
                    for d in range(4):
                        r = orth[q, d]
                        if r >= 0 and board[r] == opp:
                            board[r] = 0
    visited[:] = False


@njit(cache=True)
def determinize(own, known, opp_count, me, exclude, orth, rng, out):
    """Fill ``out`` with a hypothesis board; returns True if it was relaxed.

    Own stones and known opponent stones are fixed; the remaining
    ``opp_count - |known|`` opponent stones go to distinct uniform empty
    points (never ``exclude``). A hypothesis with a zero-liberty chain is
    redrawn, up to DETERMINIZE_ATTEMPTS draws in total.
    """
    npts = own.shape[0]
    opp = 3 - me
    pool = np.empty(npts, dtype=np.int32)
    chain = np.empty(npts, dtype=np.int32)
    visited = np.zeros(npts, dtype=np.bool_)
    npool = 0
    nknown = 0
    for p in range(npts):
        if own[p]:
            continue
        if known[p]:
            nknown += 1
        elif p != exclude:
            pool[npool] = p
            npool += 1
    need = opp_count - nknown
    if need < 0:
        need = 0
    if need > npool:
        need = npool
    for attempt in range(DETERMINIZE_ATTEMPTS):
        for p in range(npts):
            if own[p]:
                out[p] = me
            elif known[p]:
                out[p] = opp
            else:
                out[p] = 0
        for t in range(need):
            s = t + nb_uniform_below(rng, npool - t)
            q = pool[s]
            pool[s] = pool[t]
            pool[t] = q
            out[q] = opp
        if _all_chains_alive(out, orth, chain, visited):
            return False
    _relax(out, orth, me, chain, visited)
    return True


@njit(cache=True)
def choose_move(own, known, illegal, opp_count, me, opp_passed,
                n_playouts, cap, komi, orth, diag, rng):
    """Flat Monte Carlo move choice; returns a point index or PASS.

    Candidate loop is outer (points in scan order, then pass), playout loop
    inner. A candidate that is illegal on a hypothesis scores a loss for
    that sample. Strictly better means replace, so ties keep the lowest
    point and pass wins only outright.
    """
    npts = own.shape[0]
    opp = 3 - me
    view = np.zeros(npts, dtype=np.int8)
    for p in range(npts):
        if own[p]:
            view[p] = me
        elif known[p]:
            view[p] = opp
    hyp = np.empty(npts, dtype=np.int8)
    captured = np.empty(npts, dtype=np.int32)
    chain = np.empty(npts, dtype=np.int32)
    visited = np.zeros(npts, dtype=np.bool_)
    nolog = np.empty(0, dtype=np.int32)

    any_point = False
    best = -1.0
    best_move = -1
    for p in range(npts):
        if own[p] or known[p] or illegal[p]:
            continue
        if is_eyelike(view, orth, diag, me, p):
            continue
        any_point = True
        wins = 0
        for _ in range(n_playouts):
            determinize(own, known, opp_count, me, p, orth, rng, hyp)
            code, ko = play(hyp, orth, me, p, -1, captured, chain, visited)
            if code < 0:
                continue
            if playout(hyp, orth, diag, opp, ko, 0, cap, komi, rng, nolog) == me:
                wins += 1
        mean = wins / n_playouts
        if mean > best:
            best = mean
            best_move = p
    if not any_point:
        return -1
    passes = 2 if opp_passed else 1
    wins = 0
    for _ in range(n_playouts):
        determinize(own, known, opp_count, me, -1, orth, rng, hyp)
        if playout(hyp, orth, diag, opp, -1, passes, cap, komi, rng, nolog) == me:
            wins += 1
    if wins / n_playouts > best:
        return -1
    return best_move
