"""Generate problems across the difficulty scale and show what comes out."""

import json

from formalgrade.apg import GenerationRequest, generate
from formalgrade.documents import problem_to_doc
from formalgrade.errors import NoCandidateInBand

for kind in ("CfgWords", "FindDerivation", "CnfTransform", "Cyk", "WhileToTm"):
    print(f"\n=== {kind}")
    for band in ((1, 4), (5, 10)):
        try:
            problem = generate(GenerationRequest(kind=kind, d_min=band[0],
                                                 d_max=band[1], seed=17))
        except NoCandidateInBand as exc:
            print(f"  band {band}: {exc}")
            continue
        doc = problem_to_doc(problem)
        print(f"  band {band}:")
        print("   ", json.dumps(doc["payload"], sort_keys=True)[:160])
