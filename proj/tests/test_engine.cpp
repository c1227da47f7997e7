#include <doctest.h>

#include <cmath>
#include <deque>
#include <memory>
#include <vector>

#include "cro.hpp"
#include "errors.hpp"
#include "rng.hpp"

using namespace croann;
using cro::CroParams;
using cro::Engine;
using cro::ReactionKind;

namespace {

using Vec = std::vector<double>;

// Objective that replays a scripted list of values; lets tests pin the PE of
// every evaluation exactly.
struct ScriptedObjective {
    std::shared_ptr<std::deque<double>> values = std::make_shared<std::deque<double>>();
    double operator()(const Vec&) const {
        REQUIRE(!values->empty());
        const double v = values->front();
        values->pop_front();
        return v;
    }
};

Engine<Vec> scripted_engine(CroParams params, std::initializer_list<double> init_pes,
                            ScriptedObjective& objective, std::uint64_t seed = 99) {
    for (double pe : init_pes) objective.values->push_back(pe);
    params.pop_size = int(init_pes.size());
    return Engine<Vec>(
        params, [](Rng&) { return Vec{0.0}; }, objective, seed);
}

double sphere(const Vec& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

CroParams table_params(long fe_limit) {
    CroParams p;
    p.pop_size = 20;
    p.initial_ke = 100.0;
    p.buffer_init = 0.0;
    p.mole_coll = 0.1;
    p.ke_loss_rate = 0.1;
    p.decomp_threshold = 300;
    p.synth_threshold = 500.0;
    p.fe_limit = fe_limit;
    return p;
}

constexpr int kDim = 10;

Vec random_point(Rng& rng) {
    Vec x(kDim);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    return x;
}

Vec vec_neighbour(const Vec& x, Rng& rng) {
    Vec out = x;
    out[rng.index(out.size())] += rng.gaussian(std::sqrt(0.1));
    return out;
}

std::pair<Vec, Vec> vec_decompose(const Vec& x, Rng& rng) {
    auto perturb = [&rng](Vec v) {
        bool changed = false;
        for (double& e : v)
            if (rng.coin(0.5)) {
                e += rng.gaussian(std::sqrt(0.1));
                changed = true;
            }
        if (!changed) v[rng.index(v.size())] += rng.gaussian(std::sqrt(0.1));
        return v;
    };
    Vec a = perturb(x);
    Vec b = perturb(x);
    return {std::move(a), std::move(b)};
}

Vec vec_synthesize(const Vec& a, const Vec& b, Rng& rng) {
    Vec out = a;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (rng.coin(0.5)) out[i] = b[i];
    return out;
}

}  // namespace

TEST_SUITE("cro_engine") {

TEST_CASE("energy rule helpers reproduce the worked examples") {
    SUBCASE("on-wall accept splits the surplus") {
        const auto out = cro::on_wall_energy(10.0, 5.0, 12.0, 0.8);
        CHECK(out.accepted);
        CHECK(out.new_ke == doctest::Approx(2.4).epsilon(1e-15));
        CHECK(out.buffer_gain == doctest::Approx(0.6).epsilon(1e-15));
    }
    SUBCASE("on-wall reject") {
        const auto out = cro::on_wall_energy(10.0, 1.0, 12.0, 0.8);
        CHECK(!out.accepted);
    }
    SUBCASE("on-wall boundary equality accepted with zero surplus") {
        const auto out = cro::on_wall_energy(10.0, 0.0, 10.0, 1.0);
        CHECK(out.accepted);
        CHECK(out.new_ke == 0.0);
        CHECK(out.buffer_gain == 0.0);
    }
    SUBCASE("decomposition even split") {
        const auto out = cro::decomposition_energy(20.0, 10.0, 12.0, 8.0, 0.0, 0.5, 0.5, 0.5);
        CHECK(out.accepted);
        CHECK(out.ke1 == doctest::Approx(5.0));
        CHECK(out.ke2 == doctest::Approx(5.0));
        CHECK(out.buffer_draw == 0.0);
    }
    SUBCASE("decomposition rejected without buffer") {
        const auto out = cro::decomposition_energy(20.0, 0.0, 15.0, 10.0, 0.0, 1.0, 1.0, 0.5);
        CHECK(!out.accepted);
    }
    SUBCASE("decomposition borrows the full buffer at delta 1,1") {
        const auto out = cro::decomposition_energy(20.0, 0.0, 15.0, 10.0, 100.0, 1.0, 1.0, 0.5);
        CHECK(out.accepted);
        CHECK(out.buffer_draw == 100.0);
        CHECK(out.ke1 + out.ke2 == doctest::Approx(95.0).epsilon(1e-12));
    }
    SUBCASE("intermolecular pools and splits") {
        const auto out = cro::intermolecular_energy(10.0, 5.0, 10.0, 5.0, 10.0, 10.0, 0.25);
        CHECK(out.accepted);
        CHECK(out.ke1 == doctest::Approx(2.5));
        CHECK(out.ke2 == doctest::Approx(7.5));
    }
    SUBCASE("intermolecular rejects a deficit") {
        CHECK(!cro::intermolecular_energy(10.0, 0.0, 10.0, 0.0, 11.0, 10.0, 0.5).accepted);
    }
    SUBCASE("synthesis pools everything") {
        const auto out = cro::synthesis_energy(10.0, 100.0, 12.0, 100.0, 50.0);
        CHECK(out.accepted);
        CHECK(out.new_ke == doctest::Approx(172.0));
    }
    SUBCASE("synthesis rejects a deficit") {
        CHECK(!cro::synthesis_energy(1.0, 0.0, 1.0, 0.0, 3.0).accepted);
    }
}

TEST_CASE("initialization sets energies, counters and the budget") {
    CroParams params = table_params(50'000);
    Engine<Vec> engine(
        params, [](Rng& rng) { return Vec{rng.uniform()}; },
        [](const Vec& x) { return x[0]; }, 1);
    CHECK(engine.population().size() == 20);
    CHECK(engine.fe_count() == 20);
    CHECK(engine.buffer() == 0.0);
    double best = 1e18;
    for (const auto& m : engine.population()) {
        CHECK(m.ke == 100.0);
        CHECK(m.num_hit == 0);
        CHECK(m.min_hit == 0);
        CHECK(m.min_pe == m.pe);
        CHECK(m.min_structure == m.structure);
        best = std::min(best, m.pe);
    }
    CHECK(engine.best_pe() == best);
}

TEST_CASE("constant objective totals its energy exactly") {
    CroParams params = table_params(1000);
    params.pop_size = 3;
    Engine<Vec> engine(
        params, [](Rng&) { return Vec{0.0}; }, [](const Vec&) { return 5.0; }, 2);
    CHECK(engine.best_pe() == 5.0);
    CHECK(engine.total_energy() == 315.0);
}

TEST_CASE("singleton population") {
    CroParams params = table_params(100);
    params.pop_size = 1;
    params.mole_coll = 1.0;  // would always pick inter-molecular if it could
    Engine<Vec> engine(
        params, [](Rng&) { return Vec{0.5}; }, sphere, 3);
    CHECK(engine.population().size() == 1);
    CHECK(engine.best_pe() == engine.population()[0].pe);
    for (int i = 0; i < 100; ++i) {
        const auto reaction = engine.select_reaction();
        CHECK((reaction.kind == ReactionKind::on_wall ||
               reaction.kind == ReactionKind::decomposition));
    }
}

TEST_CASE("pop_size < 1 is a configuration error") {
    CroParams params;
    params.pop_size = 0;
    CHECK_THROWS_AS(params.validate(), ConfigError);
}

TEST_CASE("decomposition trigger follows the inactivity rule") {
    CroParams params = table_params(100000);
    params.pop_size = 1;
    ScriptedObjective objective;
    // init + many rejected on-wall candidates (always worse than pe+ke)
    objective.values->push_back(10.0);
    Engine<Vec> engine(
        params, [](Rng&) { return Vec{0.0}; }, objective, 4);
    // drive num_hit - min_hit past the threshold via rejected on-wall steps
    for (int i = 0; i < 301; ++i) {
        objective.values->push_back(1e6);
        CHECK(!engine.on_wall(0, Vec{1.0}));
    }
    CHECK(engine.population()[0].num_hit == 301);
    CHECK(engine.population()[0].min_hit == 0);
    const auto reaction = engine.select_reaction();
    CHECK(reaction.kind == ReactionKind::decomposition);
}

TEST_CASE("synthesis trigger needs both molecules at or below the threshold") {
    CroParams params = table_params(1000);
    params.pop_size = 2;
    params.mole_coll = 1.0;  // always inter-molecular
    params.initial_ke = 100.0;
    params.synth_threshold = 500.0;
    Engine<Vec> engine(
        params, [](Rng&) { return Vec{0.0}; }, [](const Vec&) { return 1.0; }, 5);
    CHECK(engine.select_reaction().kind == ReactionKind::synthesis);

    params.synth_threshold = 50.0;  // fresh KE 100 exceeds it
    Engine<Vec> engine2(
        params, [](Rng&) { return Vec{0.0}; }, [](const Vec&) { return 1.0; }, 6);
    CHECK(engine2.select_reaction().kind == ReactionKind::intermolecular);
}

TEST_CASE("on-wall step: acceptance, energy bookkeeping, counters") {
    CroParams params = table_params(1000);
    params.initial_ke = 5.0;
    ScriptedObjective objective;
    Engine<Vec> engine = scripted_engine(params, {10.0}, objective);

    SUBCASE("accepted move with surplus 3") {
        objective.values->push_back(12.0);
        CHECK(engine.on_wall(0, Vec{1.0}));
        const auto& m = engine.population()[0];
        CHECK(m.pe == 12.0);
        CHECK(m.structure == Vec{1.0});
        CHECK(m.num_hit == 1);
        // surplus 3 split between molecule and buffer
        CHECK(m.ke + engine.buffer() == doctest::Approx(3.0).epsilon(1e-15));
        const double retention = m.ke / 3.0;
        CHECK(retention >= params.ke_loss_rate);
        CHECK(retention <= 1.0);
        // a worse PE is not a personal best
        CHECK(m.min_pe == 10.0);
        CHECK(m.min_hit == 0);
        CHECK(engine.fe_count() == 2);
    }
    SUBCASE("rejected move leaves everything but num_hit untouched") {
        objective.values->push_back(100.0);  // 10 + 5 < 100
        const Vec before = engine.population()[0].structure;
        CHECK(!engine.on_wall(0, Vec{1.0}));
        const auto& m = engine.population()[0];
        CHECK(m.structure == before);
        CHECK(m.pe == 10.0);
        CHECK(m.ke == 5.0);
        CHECK(m.num_hit == 1);
        CHECK(engine.buffer() == 0.0);
        // the rejected candidate still counted as an evaluation
        CHECK(engine.fe_count() == 2);
    }
    SUBCASE("personal best updates on improvement") {
        objective.values->push_back(4.0);
        CHECK(engine.on_wall(0, Vec{2.0}));
        const auto& m = engine.population()[0];
        CHECK(m.min_pe == 4.0);
        CHECK(m.min_hit == 1);
        CHECK(m.min_structure == Vec{2.0});
        CHECK(engine.best_pe() == 4.0);
    }
}

TEST_CASE("decomposition step grows the population and conserves energy") {
    CroParams params = table_params(1000);
    params.initial_ke = 10.0;
    ScriptedObjective objective;
    Engine<Vec> engine = scripted_engine(params, {20.0}, objective);
    const double initial = engine.total_energy();

    SUBCASE("accepted split") {
        objective.values->push_back(12.0);
        objective.values->push_back(8.0);
        CHECK(engine.decompose(0, Vec{1.0}, Vec{2.0}));
        CHECK(engine.population().size() == 2);
        const auto& c1 = engine.population()[0];
        const auto& c2 = engine.population()[1];
        CHECK(c1.pe == 12.0);
        CHECK(c2.pe == 8.0);
        CHECK(c1.ke >= 0.0);
        CHECK(c2.ke >= 0.0);
        CHECK(c1.ke + c2.ke == doctest::Approx(10.0).epsilon(1e-12));
        CHECK(c1.num_hit == 0);
        CHECK(c1.min_pe == 12.0);
        CHECK(engine.buffer() == 0.0);
        CHECK(engine.total_energy() == doctest::Approx(initial).epsilon(1e-12));
        CHECK(engine.fe_count() == 3);
    }
    SUBCASE("rejected when the deficit exceeds the buffer") {
        objective.values->push_back(25.0);
        objective.values->push_back(25.0);
        CHECK(!engine.decompose(0, Vec{1.0}, Vec{2.0}));
        CHECK(engine.population().size() == 1);
        CHECK(engine.population()[0].num_hit == 1);
        CHECK(engine.population()[0].pe == 20.0);
        CHECK(engine.total_energy() == doctest::Approx(initial).epsilon(1e-12));
        // the cheap rejected child is still the global best
        CHECK(engine.best_pe() == 20.0);
    }
    SUBCASE("a rejected child can still set the global best") {
        objective.values->push_back(1.0);
        objective.values->push_back(1000.0);
        CHECK(!engine.decompose(0, Vec{7.0}, Vec{8.0}));
        CHECK(engine.best_pe() == 1.0);
        CHECK(engine.best_structure() == Vec{7.0});
    }
    SUBCASE("buffer borrow makes an energy-deficient split possible") {
        CroParams rich = params;
        rich.buffer_init = 1000.0;
        ScriptedObjective objective2;
        Engine<Vec> engine2 = scripted_engine(rich, {20.0}, objective2);
        const double initial2 = engine2.total_energy();
        objective2.values->push_back(25.0);
        objective2.values->push_back(25.0);  // deficit 20, buffer can cover
        const bool accepted = engine2.decompose(0, Vec{1.0}, Vec{2.0});
        if (accepted) {
            CHECK(engine2.population().size() == 2);
            CHECK(engine2.buffer() < 1000.0);
        }
        CHECK(engine2.buffer() >= 0.0);
        CHECK(engine2.total_energy() == doctest::Approx(initial2).epsilon(1e-12));
    }
}

TEST_CASE("intermolecular step pools energies") {
    CroParams params = table_params(1000);
    params.initial_ke = 5.0;
    ScriptedObjective objective;
    Engine<Vec> engine = scripted_engine(params, {10.0, 10.0}, objective);
    const double initial = engine.total_energy();

    SUBCASE("accepted with unchanged PEs") {
        objective.values->push_back(10.0);
        objective.values->push_back(10.0);
        CHECK(engine.intermolecular(0, 1, Vec{1.0}, Vec{2.0}));
        const auto& m1 = engine.population()[0];
        const auto& m2 = engine.population()[1];
        CHECK(m1.ke + m2.ke == doctest::Approx(10.0).epsilon(1e-12));
        CHECK(m1.num_hit == 1);
        CHECK(m2.num_hit == 1);
        CHECK(engine.total_energy() == doctest::Approx(initial).epsilon(1e-12));
    }
    SUBCASE("rejected on deficit") {
        ScriptedObjective obj2;
        CroParams broke = params;
        broke.initial_ke = 0.0;
        Engine<Vec> engine2 = scripted_engine(broke, {10.0, 10.0}, obj2);
        obj2.values->push_back(11.0);
        obj2.values->push_back(10.0);
        CHECK(!engine2.intermolecular(0, 1, Vec{1.0}, Vec{2.0}));
        CHECK(engine2.population()[0].pe == 10.0);
        CHECK(engine2.population()[1].pe == 10.0);
        CHECK(engine2.population()[0].num_hit == 1);
        CHECK(engine2.population()[1].num_hit == 1);
    }
}

TEST_CASE("synthesis step merges molecules") {
    CroParams params = table_params(1000);
    params.initial_ke = 100.0;
    ScriptedObjective objective;
    Engine<Vec> engine = scripted_engine(params, {10.0, 12.0}, objective);
    const double initial = engine.total_energy();

    SUBCASE("accepted merge pools all energy") {
        objective.values->push_back(50.0);
        CHECK(engine.synthesize(0, 1, Vec{3.0}));
        CHECK(engine.population().size() == 1);
        const auto& m = engine.population()[0];
        CHECK(m.pe == 50.0);
        CHECK(m.ke == doctest::Approx(172.0).epsilon(1e-12));
        CHECK(m.num_hit == 0);
        CHECK(m.min_hit == 0);
        CHECK(m.min_pe == 50.0);
        CHECK(engine.total_energy() == doctest::Approx(initial).epsilon(1e-12));
        CHECK(engine.fe_count() == 3);
    }
    SUBCASE("rejected merge bumps both counters") {
        ScriptedObjective obj2;
        CroParams broke = params;
        broke.initial_ke = 0.0;
        Engine<Vec> engine2 = scripted_engine(broke, {1.0, 1.0}, obj2);
        obj2.values->push_back(3.0);
        CHECK(!engine2.synthesize(0, 1, Vec{3.0}));
        CHECK(engine2.population().size() == 2);
        CHECK(engine2.population()[0].num_hit == 1);
        CHECK(engine2.population()[1].num_hit == 1);
    }
}

TEST_CASE("run stops without evaluating when the budget is already spent") {
    CroParams params = table_params(20);
    Engine<Vec> engine(
        params, [](Rng& rng) { return random_point(rng); }, sphere, 7);
    const auto result =
        engine.run(vec_neighbour, vec_decompose, vec_synthesize);
    CHECK(result.fe_count == 20);
    CHECK(!result.stopped_by_check);
    CHECK(result.best_pe == engine.best_pe());
}

TEST_CASE("long randomized run keeps every invariant") {
    CroParams params = table_params(30'000);
    Engine<Vec> engine(
        params, [](Rng& rng) { return random_point(rng); }, sphere, 8);
    const double initial = engine.initial_energy();
    const double tolerance = 1e-9 * initial;

    long reactions = 0;
    long last_fe = engine.fe_count();
    double last_best = engine.best_pe();
    std::size_t last_pop = engine.population().size();
    const double best_after_init = engine.best_pe();

    auto stop_check = [&](const Engine<Vec>& e) {
        reactions += 1;
        const long fe_delta = e.fe_count() - last_fe;
        CHECK(fe_delta >= 1);
        CHECK(fe_delta <= 2);
        last_fe = e.fe_count();
        CHECK(e.best_pe() <= last_best);
        last_best = e.best_pe();
        const long pop_delta = long(e.population().size()) - long(last_pop);
        CHECK(pop_delta >= -1);
        CHECK(pop_delta <= 1);
        last_pop = e.population().size();
        CHECK(e.buffer() >= 0.0);
        for (const auto& m : e.population()) {
            CHECK(m.ke >= 0.0);
            CHECK(m.min_pe <= m.pe);
            CHECK(m.min_hit <= m.num_hit);
        }
        if (reactions % 512 == 0)
            CHECK(std::abs(e.total_energy() - initial) <= tolerance);
        return false;
    };

    const auto result = engine.run(vec_neighbour, vec_decompose, vec_synthesize, stop_check);
    CHECK(reactions >= 10'000);
    CHECK(result.fe_count <= params.fe_limit);
    CHECK(std::abs(engine.total_energy() - initial) <= tolerance);
    CHECK(result.best_pe <= best_after_init);
    CHECK(result.best_pe == engine.best_pe());
}

TEST_CASE("progress callback reports each reaction") {
    CroParams params = table_params(500);
    Engine<Vec> engine(
        params, [](Rng& rng) { return random_point(rng); }, sphere, 21);
    long calls = 0;
    long last_fe = 0;
    double last_best = engine.best_pe();
    const auto result = engine.run(
        vec_neighbour, vec_decompose, vec_synthesize, {},
        [&](long fe, double best) {
            calls += 1;
            CHECK(fe > last_fe);
            CHECK(best <= last_best);
            last_fe = fe;
            last_best = best;
        });
    CHECK(calls > 0);
    CHECK(last_fe == result.fe_count);
    CHECK(last_best == result.best_pe);
}

TEST_CASE("identical seeds give identical runs") {
    const CroParams params = table_params(5'000);
    auto run_once = [&] {
        Engine<Vec> engine(
            params, [](Rng& rng) { return random_point(rng); }, sphere, 1234);
        return engine.run(vec_neighbour, vec_decompose, vec_synthesize);
    };
    const auto a = run_once();
    const auto b = run_once();
    CHECK(a.best_pe == b.best_pe);
    CHECK(a.best_structure == b.best_structure);
    CHECK(a.fe_count == b.fe_count);
}

}  // TEST_SUITE
