#include <doctest.h>

#include "shtukalab/job.hpp"

using namespace shtukalab;

namespace {

const char* kDrinfeldJob =
    R"({"field":{"p":2,"r":2,"m":1,"modulus":[1,1,1]},"shtuka":{"dim":1,"matrix":[["0"]]},"cmd":"drinfeld"})";

} // namespace

TEST_CASE("parse_spec accepts the documented format") {
    Job job = parse_spec(kDrinfeldJob);
    CHECK(job.cmd == "drinfeld");
    REQUIRE(job.field);
    CHECK(job.field->q() == 4);
    REQUIRE(job.shtuka.has_value());
    CHECK(job.shtuka->rank == 1);
    CHECK(job.shtuka->F.at(0, 0) == 0);
}

TEST_CASE("parse_spec diagnostics") {
    // missing modulus names the field block
    try {
        parse_spec(R"({"field":{"p":2,"r":2,"m":1},"cmd":"balance"})");
        FAIL("expected UnknownKey");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnknownKey);
        CHECK(std::string(e.what()).find("modulus") != std::string::npos);
        CHECK(std::string(e.what()).find("field") != std::string::npos);
    }
    // unknown element symbol in a matrix entry
    try {
        parse_spec(
            R"({"field":{"p":2,"r":2,"m":1,"modulus":[1,1,1]},"shtuka":{"dim":1,"matrix":[["h+1"]]},"cmd":"drinfeld"})");
        FAIL("expected BadElement");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::BadElement);
        CHECK(std::string(e.what()).find("matrix[0][0]") != std::string::npos);
    }
    // unknown keys anywhere
    CHECK_THROWS_AS(parse_spec(R"({"field":{"p":2,"r":1,"m":1,"modulus":[0,1],"extra":1},"cmd":"balance"})"), Error);
    // malformed JSON is a syntax error, not a crash
    try {
        parse_spec("{not json");
        FAIL("expected SyntaxError");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SyntaxError);
    }
    // reducible modulus propagates from field validation
    CHECK_THROWS_AS(parse_spec(R"({"field":{"p":2,"r":2,"m":1,"modulus":[1,0,1]},"cmd":"balance"})"), Error);
}

TEST_CASE("run: balance on alpha_q reports four true flags") {
    Job job = parse_spec(
        R"({"field":{"p":2,"r":2,"m":1,"modulus":[1,1,1]},
            "presentation":{"generators":[{"name":"x","weight":1,"trunc":4,"relation":{}}]},
            "cmd":"balance"})");
    Report rep = run(job);
    CHECK(rep.machine.at("result.cond_i") == "true");
    CHECK(rep.machine.at("result.cond_ii") == "true");
    CHECK(rep.machine.at("result.cond_iii") == "true");
    CHECK(rep.machine.at("result.cond_iv") == "true");
    CHECK(rep.machine.at("result.balanced") == "true");
    CHECK(rep.exit_code == 0);
}

TEST_CASE("run: sseries reproduces the 21,21,21 profile") {
    Job job = parse_spec(
        R"({"field":{"p":2,"r":2,"m":1,"modulus":[1,1,1]},
            "cmd":"sseries","options":{"exponents":[1,1,1,1,1,1]}})");
    Report rep = run(job);
    CHECK(rep.machine.at("result.ranks") == "21,21,21");
    CHECK(rep.machine.at("result.s_coeffs") == "1,6,15,20,15,6,1");
}

TEST_CASE("machine output is byte-identical across runs") {
    Job job = parse_spec(kDrinfeldJob);
    CHECK(render(run(job), true) == render(run(job), true));
    Job job2 = parse_spec(
        R"({"field":{"p":2,"r":2,"m":1,"modulus":[1,1,1]},
            "shtuka":{"dim":2,"matrix":[["g","g+1"],["1","0"]]},"cmd":"classify"})");
    CHECK(render(run(job2), true) == render(run(job2), true));
}

TEST_CASE("run: roundtrip with expect_iso sets the exit code") {
    Job job = parse_spec(
        R"({"field":{"p":2,"r":2,"m":1,"modulus":[1,1,1]},
            "presentation":{"generators":[{"name":"x","weight":1,"trunc":2,"relation":{}}]},
            "cmd":"roundtrip","options":{"expect_iso":true}})");
    Report rep = run(job); // alpha_p at q = 4 is unbalanced: u_G is not an iso
    CHECK(rep.machine.at("result.unit_iso") == "false");
    CHECK(rep.exit_code == 1);
}

TEST_CASE("run: adjoint accepts both blocks; elements as coefficient lists") {
    Job job = parse_spec(
        R"({"field":{"p":2,"r":2,"m":1,"modulus":[1,1,1]},
            "shtuka":{"dim":1,"matrix":[[[0,0]]]},
            "presentation":{"generators":[{"name":"x","weight":1,"trunc":4,"relation":{}}]},
            "cmd":"adjoint"})");
    Report rep = run(job);
    CHECK(rep.machine.at("result.dim_grp_hom") == "1");
    CHECK(rep.machine.at("result.dim_sht_hom") == "1");
    CHECK(rep.machine.at("result.equal") == "true");
}

TEST_CASE("unknown command is reported") {
    CHECK_THROWS_AS(run(parse_spec(R"({"field":{"p":2,"r":1,"m":1,"modulus":[0,1]},"cmd":"frobnicate"})")), Error);
}
