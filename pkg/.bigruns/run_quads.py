import json
import time

from constel import CountJob, basic_pattern_for, count_up_to, estimate_pdf, hl_constant, ratio_to_hl

out = {}
for m, limit in ((4, 7 * 10**10), (5, 4 * 10**11)):
    t0 = time.time()
    job = CountJob(basic_pattern_for(m), limit)
    res = count_up_to(job, checkpoint_path=f"/root/pkg/.bigruns/m{m}.ckpt")
    est = estimate_pdf(res)
    out[m] = {
        "limit": limit,
        "count": res.count,
        "li": est.li.value,
        "c_estimate": est.c_estimate,
        "conjectured": est.conjectured,
        "relative_deviation": est.relative_deviation,
        "ratio": ratio_to_hl(est),
        "wall": time.time() - t0,
    }
    with open("/root/pkg/.bigruns/quads_results.json", "w") as fh:
        json.dump(out, fh, indent=2)
    print(m, out[m], flush=True)
