"""Exponential FIC model averaging instead of hard selection.

Weights proportional to exp(-lambda fic_M / fic_wide) blend every
candidate's focus estimate; lambda = 0 averages uniformly and larger
lambda concentrates on low-risk candidates.
"""

from ficsel import DesignTemplate, FocusSpec, SearchConfig, load_birds, model_average_weights, run_search

birds = load_birds()
template = DesignTemplate.with_pairwise_interactions(birds.covariate_names)
focus = FocusSpec(kind="mean-response", eval_points=template.design_row(birds.covariates[0]))
result = run_search(
    birds,
    SearchConfig(template=template, family="poisson-log", framework="local", criterion="fic_adj"),
    focus,
)

selected = result.records[0]
print(f"hard selection: {template.indicator_string(selected.candidate.indicator)} -> {selected.mu_hat:.3f}")
for lam in (0.0, 0.5, 1.0, 2.0, 5.0):
    weights, averaged = model_average_weights(result.records, lam=lam)
    top = max(range(len(weights)), key=weights.__getitem__)
    top_ind = template.indicator_string(result.records[top].candidate.indicator)
    print(
        f"lambda {lam:4.1f}: averaged focus {averaged:7.3f}  "
        f"max weight {weights[top]:.3f} on {top_ind}"
    )
