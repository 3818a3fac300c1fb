#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "qdec/config.hpp"
#include "qdec/io.hpp"
#include "qdec/random.hpp"

using namespace qdec;
using namespace qdec::io;

TEST_CASE("round trips") {
    Sampler s(1);
    Ket k = random_pure(Space{{"A", 2}, {"B", 3}}, s);
    Ket k2 = ket_from_json(json::parse(to_json(k).dump()));
    CHECK(k2.space() == k.space());
    CHECK((k2.vec() - k.vec()).norm() == 0.0);

    Density d = random_density(Space{{"A", 3}}, 2, s);
    Density d2 = density_from_json(json::parse(to_json(d).dump()));
    CHECK((d2.mat() - d.mat()).norm() == 0.0);
    CHECK((density_from_json(to_json(k)).mat() - to_density(k).mat()).norm() < 1e-15);

    Operator o(Space{{"A", 2}}, Space{{"C", 3}}, haar_isometry(3, 2, s));
    Operator o2 = operator_from_json(to_json(o));
    CHECK(o2.in() == o.in());
    CHECK(o2.out() == o.out());
    CHECK((o2.mat() - o.mat()).norm() == 0.0);

    Channel c = depolarizing_channel("A", "C", 2, 0.3);
    Channel c2 = channel_from_json(to_json(c));
    CHECK(c2.kraus().size() == c.kraus().size());
    for (std::size_t i = 0; i < c.kraus().size(); ++i) CHECK((c2.kraus()[i] - c.kraus()[i]).norm() == 0.0);

    const auto path = (std::filesystem::temp_directory_path() / "qdec_io_roundtrip.json").string();
    write_file(path, to_json(d));
    CHECK(read_file(path) == to_json(d));
    std::remove(path.c_str());
}

TEST_CASE("lenient forms") {
    // real entries, flat vectors and row vectors for kets
    json j = json::parse(R"({"labels": [["A", 2]], "kind": "pure", "matrix": [1, 0]})");
    CHECK(ket_from_json(j).vec()(0) == cplx(1, 0));
    j["matrix"] = json::parse("[[[0, 0], [0, 1]]]");
    CHECK(ket_from_json(j).vec()(1) == cplx(0, 1));
    json op = json::parse(R"({"labels": [["A", 2]], "kind": "op", "matrix": [[1, 0], [0, 1]]})");
    Operator id = operator_from_json(op);
    CHECK(id.in() == id.out());
    CHECK((id.mat() - Mat::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("malformed input") {
    CHECK_THROWS_AS(matrix_from_json(json::array()), InputError);
    CHECK_THROWS_AS(matrix_from_json(json::parse("[[1, 2], [3]]")), InputError);
    CHECK_THROWS_AS(matrix_from_json(json::parse("[[\"x\"]]")), InputError);
    CHECK_THROWS_AS(space_from_json(json::parse("[[\"A\", 2], [\"A\", 3]]")), InputError);
    CHECK_THROWS_AS(space_from_json(json::parse("[[\"A\", 2.5]]")), InputError);

    json bad_dim = json::parse(R"({"labels": [["A", 2]], "kind": "density", "matrix": [[1, 0, 0], [0, 0, 0], [0, 0, 0]]})");
    CHECK_THROWS_AS(density_from_json(bad_dim), InputError);
    json not_psd = json::parse(R"({"labels": [["A", 2]], "kind": "density", "matrix": [[2, 0], [0, -1]]})");
    CHECK_THROWS_AS(density_from_json(not_psd), InputError);
    json wrong_kind = json::parse(R"({"labels": [["A", 2]], "kind": "density", "matrix": [1, 0]})");
    CHECK_THROWS_AS(ket_from_json(wrong_kind), InputError);
    CHECK_THROWS_AS(ket_from_json(json::object()), InputError);

    json not_tp = json::parse(R"({"in": [["A", 2]], "out": [["A", 2]], "kraus": [[[0.5, 0], [0, 0.5]]]})");
    CHECK_THROWS_AS(channel_from_json(not_tp), InputError);
    json empty = json::parse(R"({"in": [["A", 2]], "out": [["A", 2]], "kraus": []})");
    CHECK_THROWS_AS(channel_from_json(empty), InputError);

    CHECK_THROWS_AS(read_file("/nonexistent/qdec.json"), InputError);
    const auto path = (std::filesystem::temp_directory_path() / "qdec_io_broken.json").string();
    {
        std::FILE* f = std::fopen(path.c_str(), "w");
        std::fputs("{\"labels\": [", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(read_file(path), InputError);
    std::remove(path.c_str());
}

TEST_CASE("error messages name the problem") {
    json j = json::parse(R"({"labels": [["A", 2]], "kind": "density", "matrix": [[2, 0], [0, -1]]})");
    try {
        density_from_json(j);
        FAIL("accepted a non-positive density");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("labels") == std::string::npos);
    }
}

TEST_CASE("experiment config round trip") {
    ExperimentConfig c;
    c.command = "decouple";
    c.inputs = {{"state", "rho.json"}};
    c.seed = 7;
    c.samples = 500;
    c.eps = 0.01;
    c.out_dir = "out";
    c.params = json::parse(R"({"corollary": "fqsw", "dim_a": 4, "split": 2})");
    CHECK(config_from_json(to_json(c)) == c);
    CHECK(config_from_json(json::parse(to_json(c).dump())) == c);

    ExperimentConfig e;
    e.command = "entropy";
    CHECK_FALSE(e.stochastic());
    CHECK_NOTHROW(e.validate());
    CHECK(config_from_json(to_json(e)) == e);

    c.seed.reset();
    CHECK_THROWS_AS(c.validate(), InputError);
    CHECK_THROWS_AS(config_from_json(to_json(c)), InputError);
    ExperimentConfig r;
    r.command = "rate";
    CHECK_NOTHROW(r.validate());
    r.params["optimize"] = true;
    CHECK_THROWS_AS(r.validate(), InputError);

    CHECK_THROWS_AS(config_from_json(json::parse(R"({"command": "nope"})")), InputError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"command": "lock", "seed": -3})")), InputError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"command": "entropy", "samples": "many"})")), InputError);
}
