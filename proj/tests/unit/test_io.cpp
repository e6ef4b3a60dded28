#include "bellshape/io.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace bellshape;
using io::json;

TEST(Io, FormatsSeventeenDigits) {
    EXPECT_EQ(io::fmt(0.1), "0.10000000000000001");
    EXPECT_EQ(io::fmt(-0.0), "0");
    EXPECT_EQ(io::fmt(2.0), "2");
}

TEST(Io, CsvWriterHeaderAndRows) {
    std::ostringstream os;
    {
        io::CsvWriter w(os, {"a", "b"});
        w.row({"1", "2"});
    }
    EXPECT_EQ(os.str(), "a,b\n1,2\n");
}

TEST(Io, ParamsRoundTrip) {
    const json in = json::parse(R"({"a": 0.5, "b": -1, "c": 0.25,
        "phi": {"knots": [-1, 0, 2], "pieces": [{"slope": 0.5, "intercept": 0}, {"slope": 0, "intercept": 1}],
                "left_tail": {"kind": "affine", "slope": 1, "intercept": 0.5},
                "right_tail": {"kind": "power", "coef": 1, "exponent": 0.5, "offset": 1},
                "steps": [{"at": 3, "weight": 1}]}})");
    const auto p = io::params_from_json(in);
    const auto out = io::params_to_json(p);
    const auto q = io::params_from_json(json::parse(out.dump()));
    EXPECT_EQ(out, io::params_to_json(q));
    for (double s : {-3.0, -0.5, 0.5, 2.5, 5.0}) EXPECT_DOUBLE_EQ(p.phi(s), q.phi(s));
}

TEST(Io, PresetsAndIntegrableForm) {
    const auto c = io::params_from_json(json{{"preset", "cauchy"}});
    EXPECT_DOUBLE_EQ(c.c, cauchy_params().c);
    EXPECT_THROW(io::params_from_json(json{{"preset", "nope"}}), StructuralError);
    EXPECT_THROW(io::params_from_json(json{{"c", 1}, {"c_int", 1}}), StructuralError);
}

TEST(Io, DensityRoundTrip) {
    for (const char* text : {R"({"family": "cauchy"})", R"({"family": "levy"})", R"({"family": "gaussian"})",
                             R"({"family": "shift", "base": {"family": "cauchy"}, "p": "1/3"})",
                             R"({"family": "rational", "numerator": [1], "denominator_factors": [{"coeffs": [1, 0, 1]}, {"coeffs": [4, 0, 1]}]})",
                             R"({"family": "exp_sum", "terms": [{"coef": "2", "rate": "1"}, {"coef": "-2", "rate": "2"}]})"}) {
        const auto f = io::density_from_json(json::parse(text));
        const auto j = io::density_to_json(f);
        const auto g = io::density_from_json(j);
        EXPECT_EQ(j, io::density_to_json(g)) << text;
        for (double x : {0.3, 1.7}) EXPECT_DOUBLE_EQ(nth_derivative(f, 2).eval(x), nth_derivative(g, 2).eval(x));
    }
}

TEST(Io, WhaleRoundTrip) {
    const auto s = io::whale_from_json(json::parse(R"({"rates": ["1", "1/2"], "cm_part": [{"location": "3", "mass": "1"}]})"));
    EXPECT_EQ(s.order(), 2);
    EXPECT_EQ(io::whale_to_json(io::whale_from_json(io::whale_to_json(s))), io::whale_to_json(s));
}

TEST(Io, PffAndAmcm) {
    const auto h = io::pff_from_json(json::parse(R"({"a": 0.1, "atoms": [1, -2]})"));
    EXPECT_EQ(io::pff_to_json(h)["atoms"].size(), 2u);
    EXPECT_THROW(io::pff_from_json(json::parse(R"({"atoms": [0]})")), DomainError);
    const auto g = io::amcm_from_json(json::parse(R"({"mu_plus": {"atoms": [{"location": 1, "mass": 2}]}, "m": 0.5})"));
    EXPECT_EQ(io::amcm_to_json(io::amcm_from_json(io::amcm_to_json(g))), io::amcm_to_json(g));
}

TEST(Io, UnknownFamily) { EXPECT_THROW(io::density_from_json(json{{"family", "x"}}), StructuralError); }
