"""Forward DRAT checker.

Small and slow, meant for the proofs produced by the embedded solver on
instances of modest size. Lemmas are checked for RUP first and RAT on
their first literal otherwise. Deletions of unit clauses are ignored, as
is customary.
"""

from __future__ import annotations

from collections import defaultdict


class _DB:
    def __init__(self):
        self.clauses = {}          # id -> list of literals
        self.watches = defaultdict(list)
        self.units = []            # ids of unit clauses
        self.by_key = defaultdict(list)
        self.next_id = 0
        self.empty = False

    def add(self, lits):
        lits = list(dict.fromkeys(lits))
        if any(-l in lits for l in lits):
            return None
        cid = self.next_id
        self.next_id += 1
        self.clauses[cid] = lits
        self.by_key[frozenset(lits)].append(cid)
        if not lits:
            self.empty = True
        elif len(lits) == 1:
            self.units.append(cid)
        else:
            self.watches[lits[0]].append(cid)
            self.watches[lits[1]].append(cid)
        return cid

    def delete(self, lits):
        key = frozenset(lits)
        ids = self.by_key.get(key)
        if not ids:
            return
        cid = ids.pop()
        cl = self.clauses[cid]
        if len(cl) == 1:
            # keep units, deleting them is unsound for forward checking
            ids.append(cid)
            return
        del self.clauses[cid]

    def propagate(self, assumed) -> bool:
        """Unit propagation; True if a conflict is reached."""
        val = {}
        trail = []

        def assign(l):
            v = val.get(abs(l))
            if v is None:
                val[abs(l)] = l > 0
                trail.append(l)
                return True
            return v == (l > 0)

        for l in assumed:
            if not assign(l):
                return True
        for cid in self.units:
            cl = self.clauses.get(cid)
            if cl is not None and not assign(cl[0]):
                return True
        head = 0
        while head < len(trail):
            lit = trail[head]
            head += 1
            false_lit = -lit
            wl = self.watches[false_lit]
            i = 0
            while i < len(wl):
                cid = wl[i]
                cl = self.clauses.get(cid)
                if cl is None or false_lit not in (cl[0], cl[1]):
                    wl[i] = wl[-1]
                    wl.pop()
                    continue
                if cl[0] == false_lit:
                    cl[0], cl[1] = cl[1], cl[0]
                other = cl[0]
                if val.get(abs(other)) == (other > 0):
                    i += 1
                    continue
                moved = False
                for k in range(2, len(cl)):
                    l2 = cl[k]
                    v2 = val.get(abs(l2))
                    if v2 is None or v2 == (l2 > 0):
                        cl[1], cl[k] = cl[k], cl[1]
                        self.watches[cl[1]].append(cid)
                        wl[i] = wl[-1]
                        wl.pop()
                        moved = True
                        break
                if moved:
                    continue
                if not assign(other):
                    return True
                i += 1
        return False

    def rup(self, lemma) -> bool:
        return self.propagate([-l for l in lemma])

    def rat(self, lemma) -> bool:
        if not lemma:
            return False
        p = lemma[0]
        for cl in list(self.clauses.values()):
            if -p not in cl:
                continue
            resolvent = [l for l in lemma] + [l for l in cl if l != -p]
            if any(-l in resolvent for l in resolvent):
                continue
            if not self.rup(resolvent):
                return False
        return True


def parse_proof(text: str):
    for line in text.splitlines():
        toks = line.split()
        if not toks or toks[0] == "c":
            continue
        delete = toks[0] == "d"
        if delete:
            toks = toks[1:]
        lits = [int(t) for t in toks]
        if lits and lits[-1] == 0:
            lits = lits[:-1]
        yield delete, lits


def check_drat(clauses, proof_text: str) -> bool:
    """True iff the proof derives the empty clause from ``clauses``."""
    db = _DB()
    for cl in clauses:
        db.add(cl)
    if db.empty or db.propagate([]):
        return True
    for delete, lits in parse_proof(proof_text):
        if delete:
            db.delete(lits)
            continue
        if not (db.rup(lits) or db.rat(lits)):
            return False
        if not lits:
            return True
        db.add(lits)
        if db.propagate([]):
            return True
    return False
