#include "doctest.h"

#include <cmath>

#include "qtl/observables.hpp"
#include "support.hpp"

using namespace qtl;

TEST_CASE("entropy record on a short JC run") {
    const ModelConfig cfg = test::small_config();
    const Trajectory traj = evolve(cfg);
    const std::vector<EnergyLedger> ledgers{lembas_ledger(traj), minimal_dissipation_ledger(traj)};
    const EntropyRecord rec = entropy_record(traj, ledgers, cfg.beta);
    REQUIRE(rec.t.size() == traj.size());
    CHECK(rec.ds_s.front() == 0.0);
    CHECK(std::abs(rec.i_se.front()) < 1e-12);
    for (std::size_t i = 0; i < rec.t.size(); ++i) {
        CHECK(rec.i_se[i] >= -1e-10);
        CHECK(rec.s_s[i] <= std::log(2.0) + 1e-12);
        CHECK(std::abs(rec.s_total[i] - rec.s_total.front()) < 1e-10);
        CHECK(rec.sigma[0][i] == doctest::Approx(rec.ds_s[i] - cfg.beta * ledgers[0].q_cum[i]));
        CHECK(std::isnan(rec.sigma[1][i]));
        CHECK(std::isnan(rec.sigma[2][i]));
        CHECK(std::isfinite(rec.sigma[3][i]));
    }
}

TEST_CASE("entropy record rejects ledgers of another length") {
    ModelConfig cfg = test::small_config();
    cfg.t_max = 1.0;
    const Trajectory short_run = evolve(cfg);
    cfg.t_max = 2.0;
    const Trajectory long_run = evolve(cfg);
    const std::vector<EnergyLedger> ledgers{lembas_ledger(long_run)};
    CHECK_THROWS(entropy_record(short_run, ledgers, cfg.beta));
}

TEST_CASE("a diagonal qubit under dispersive coupling keeps its entropy") {
    ModelConfig cfg = test::small_config(CouplingKind::Dispersive);
    cfg.p_eg = 0.0;
    const Trajectory traj = evolve(cfg);
    const EntropyRecord rec = entropy_record(traj, {}, cfg.beta);
    for (std::size_t i = 0; i < rec.t.size(); ++i) {
        CHECK(std::abs(rec.ds_s[i]) < 1e-13);
        CHECK(std::abs(rec.s_e[i] - rec.s_e.front()) < 1e-12);
    }
}
