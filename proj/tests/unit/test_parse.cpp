#include <gtest/gtest.h>

#include <sstream>

#include "mcs/parse.hpp"

using namespace molcs;

TEST(Parse, ComplexForms) {
    EXPECT_EQ(parse_complex("1.5"), cplx(1.5, 0));
    EXPECT_EQ(parse_complex("-2i"), cplx(0, -2));
    EXPECT_EQ(parse_complex("i"), cplx(0, 1));
    EXPECT_EQ(parse_complex("-i"), cplx(0, -1));
    EXPECT_EQ(parse_complex("1+2i"), cplx(1, 2));
    EXPECT_EQ(parse_complex(" 0.3 - 0.25i "), cplx(0.3, -0.25));
    EXPECT_EQ(parse_complex("1e-3+2.5E+1i"), cplx(1e-3, 25));
    EXPECT_EQ(parse_complex("-1-i"), cplx(-1, -1));
    EXPECT_EQ(parse_complex("(0.5,-0.7)"), cplx(0.5, -0.7));
}

TEST(Parse, ComplexErrors) {
    for (const char* bad : {"", "abc", "1+", "1+2j", "(1;2)", "1..2", "2i+1"})
        EXPECT_THROW((void)parse_complex(bad), ParseError) << bad;
}

TEST(Parse, Real) {
    EXPECT_EQ(parse_real(" -0.4 "), -0.4);
    EXPECT_THROW((void)parse_real("0.4x"), ParseError);
    EXPECT_THROW((void)parse_real(""), ParseError);
}

TEST(Parse, KeyValues) {
    std::istringstream in("# drive\naL = 0.3+0.2i\n\naM0=-0.4  # comment\nname = \"x y\"\naL = 1\n");
    const auto kv = parse_key_values(in);
    EXPECT_EQ(kv.at("aL"), "1");
    EXPECT_EQ(kv.at("aM0"), "-0.4");
    EXPECT_EQ(kv.at("name"), "x y");
    std::istringstream bad("aL 0.3\n");
    EXPECT_THROW((void)parse_key_values(bad), ParseError);
}
