import numpy as np
import pytest

from ficsel import (
    DesignTemplate,
    FocusSpec,
    SearchConfig,
    build_design,
    fit_mle,
    load_birds,
    run_search,
    wide_spec,
)

POISSON = "poisson-log"


@pytest.fixture(scope="session")
def birds():
    return load_birds()


@pytest.fixture(scope="session")
def bird_template(birds):
    return DesignTemplate.with_pairwise_interactions(birds.covariate_names)


@pytest.fixture(scope="session")
def chiles_row(birds, bird_template):
    return bird_template.design_row(birds.covariates[0])


@pytest.fixture(scope="session")
def focus_chiles(chiles_row):
    return FocusSpec(kind="mean-response", eval_points=chiles_row)


@pytest.fixture(scope="session")
def focus_exceed(birds, bird_template):
    pts = np.vstack([bird_template.design_row(birds.covariates[i]) for i in range(birds.n)])
    return FocusSpec(kind="exceedance", eval_points=pts, threshold=30.0)


@pytest.fixture(scope="session")
def bird_wide_fit(birds, bird_template):
    spec = wide_spec(bird_template, POISSON)
    return fit_mle(build_design(birds, bird_template, spec), birds.response, POISSON)


@pytest.fixture(scope="session")
def bird_search_local(birds, bird_template, focus_chiles):
    cfg = SearchConfig(
        template=bird_template, family=POISSON, framework="local", criterion="fic_adj"
    )
    return run_search(birds, cfg, focus_chiles)


@pytest.fixture(scope="session")
def bird_search_fixed(birds, bird_template, focus_chiles):
    cfg = SearchConfig(
        template=bird_template, family=POISSON, framework="fixed", criterion="fic_adj"
    )
    return run_search(birds, cfg, focus_chiles)
