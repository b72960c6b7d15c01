#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "kzoom/cipher.hpp"
#include "test_util.hpp"

namespace kzoom::cli {
namespace {

namespace fs = std::filesystem;
using test::slurp;
using test::spit;

struct Result {
  int code;
  std::string out, err;
};

Result kz(std::vector<std::string> args) {
  args.insert(args.begin(), "kzoom");
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    unsetenv("KZOOM_SEED");
    dir_ = test::scratch_dir();
  }
  void TearDown() override { unsetenv("KZOOM_SEED"); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

// --- keygen -----------------------------------------------------------------------------

TEST_F(Cli, KeygenPrintsFingerprintAndWritesParsableKey) {
  auto r = kz({"keygen", "--out", path("k.key")});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out, "db9e3a3250b7fd0d\n");
  EXPECT_EQ(key_serialize(keygen(20190325)), slurp(path("k.key")));
}

TEST_F(Cli, KeygenHonoursSeedAndOverrides) {
  auto r = kz({"--seed", "7", "--precision", "binary64", "keygen", "--out", path("k.key"), "--k", "2", "--eta",
               "0.3", "--association", "ascii", "--sites", "200"});
  ASSERT_EQ(r.code, kOk) << r.err;
  CipherKey key = key_parse(slurp(path("k.key")));
  EXPECT_EQ(key.k, 2);
  EXPECT_EQ(key.eta, "0.3");
  EXPECT_EQ(key.sites, 200);
  EXPECT_EQ(key.association, ascii_association(200));
  EXPECT_EQ(key.precision, PrecisionSpec::binary64());
  EXPECT_EQ(key.x0, keygen(7).x0);
}

TEST_F(Cli, KeygenRejectsBadValues) {
  EXPECT_EQ(kz({"keygen", "--out", path("k.key"), "--mu", "4.2"}).code, kConfig);
  EXPECT_EQ(kz({"keygen", "--out", path("k.key"), "--association", "sorted"}).code, kConfig);
  EXPECT_EQ(kz({"--precision", "decimal:8", "keygen", "--out", path("k.key")}).code, kConfig);
  EXPECT_EQ(kz({"keygen"}).code, kUsage);
  EXPECT_FALSE(fs::exists(path("k.key")));
}

TEST_F(Cli, SeedFromEnvironment) {
  setenv("KZOOM_SEED", "7", 1);
  ASSERT_EQ(kz({"keygen", "--out", path("a.key")}).code, kOk);
  EXPECT_EQ(key_parse(slurp(path("a.key"))).x0, keygen(7).x0);
  ASSERT_EQ(kz({"--seed", "8", "keygen", "--out", path("b.key")}).code, kOk);
  EXPECT_EQ(key_parse(slurp(path("b.key"))).x0, keygen(8).x0);
  setenv("KZOOM_SEED", "seven", 1);
  EXPECT_EQ(kz({"keygen", "--out", path("c.key")}).code, kConfig);
}

// --- encrypt / decrypt -------------------------------------------------------------------------

TEST_F(Cli, ReferenceKeyEncryptsHi) {
  ASSERT_EQ(kz({"--precision", "binary64", "keygen", "--out", path("k.key"), "--mu", "3.8", "--x0", "0.232323",
                "--k", "0", "--association", "ascii"})
                .code,
            kOk);
  spit(path("m.txt"), "hi");
  auto r = kz({"encrypt", "-k", path("k.key"), "-i", path("m.txt"), "-o", path("m.ct")});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(slurp(path("m.ct")), "kzoom-ct v1 text\n1713\n364\n");
  r = kz({"decrypt", "-k", path("k.key"), "-i", path("m.ct"), "-o", path("m.out")});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(slurp(path("m.out")), "hi");
}

TEST_F(Cli, BinaryCiphertextRoundTrip) {
  ASSERT_EQ(kz({"keygen", "--out", path("k.key"), "--eta", "0.4"}).code, kOk);
  std::string msg;
  for (int i = 0; i < 300; ++i) msg += static_cast<char>(i * 7);
  spit(path("m.bin"), msg);
  ASSERT_EQ(kz({"encrypt", "-k", path("k.key"), "-i", path("m.bin"), "-o", path("m.ct"), "--format", "bin",
                "--aux-seed", "5"})
                .code,
            kOk);
  EXPECT_EQ(slurp(path("m.ct")).size(), 16u + 4u * 300u);
  ASSERT_EQ(kz({"decrypt", "-k", path("k.key"), "-i", path("m.ct"), "-o", path("m.out")}).code, kOk);
  EXPECT_EQ(slurp(path("m.out")), msg);
}

TEST_F(Cli, EncryptIsDeterministic) {
  ASSERT_EQ(kz({"keygen", "--out", path("k.key")}).code, kOk);
  spit(path("m.txt"), "Deep zoom.");
  ASSERT_EQ(kz({"encrypt", "-k", path("k.key"), "-i", path("m.txt"), "-o", path("a.ct")}).code, kOk);
  ASSERT_EQ(kz({"encrypt", "-k", path("k.key"), "-i", path("m.txt"), "-o", path("b.ct")}).code, kOk);
  EXPECT_EQ(slurp(path("a.ct")), slurp(path("b.ct")));
  EXPECT_EQ(slurp(path("a.ct")), "kzoom-ct v1 text\n342\n599\n1017\n1624\n1000\n280\n1056\n338\n431\n690\n");
}

TEST_F(Cli, CipherErrorsMapToExitCodes) {
  ASSERT_EQ(kz({"--precision", "binary64", "keygen", "--out", path("k.key"), "--mu", "3.8", "--x0", "0.232323",
                "--k", "0", "--association", "ascii"})
                .code,
            kOk);
  spit(path("bad.ct"), "kzoom-ct v1 text\n100\n");
  EXPECT_EQ(kz({"decrypt", "-k", path("k.key"), "-i", path("bad.ct"), "-o", path("x")}).code, kCiphertext);
  spit(path("junk.ct"), "not a ciphertext\n");
  EXPECT_EQ(kz({"decrypt", "-k", path("k.key"), "-i", path("junk.ct"), "-o", path("x")}).code, kConfig);
  EXPECT_EQ(kz({"decrypt", "-k", path("missing.key"), "-i", path("bad.ct"), "-o", path("x")}).code, kConfig);

  ASSERT_EQ(kz({"--precision", "binary64", "keygen", "--out", path("short.key"), "--n-max", "260"}).code, kOk);
  spit(path("m.txt"), "hello");
  auto r = kz({"encrypt", "-k", path("short.key"), "-i", path("m.txt"), "-o", path("m.ct")});
  EXPECT_EQ(r.code, kGeneration);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST_F(Cli, RefusesToOverwriteInputs) {
  ASSERT_EQ(kz({"keygen", "--out", path("k.key")}).code, kOk);
  spit(path("m.txt"), "abc");
  EXPECT_EQ(kz({"encrypt", "-k", path("k.key"), "-i", path("m.txt"), "-o", path("m.txt")}).code, kConfig);
  EXPECT_EQ(slurp(path("m.txt")), "abc");
  EXPECT_EQ(kz({"encrypt", "-k", path("k.key"), "-i", path("m.txt"), "-o", path("k.key")}).code, kConfig);
}

// --- gen -----------------------------------------------------------------------------------------------

TEST_F(Cli, GenDefaultMatchesOracle) {
  auto r = kz({"gen", "--out", path("s.bin"), "--words", "256"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const std::string data = slurp(path("s.bin"));
  EXPECT_EQ(data.size(), 1024u);
  EXPECT_EQ(test::sha256_hex(data), "e7dfeecd47bca00bb5f65c6b64890a64cac185ea766dccf5f8b50ea29cfcb1d6");
  ASSERT_EQ(kz({"gen", "--out", path("t.bin"), "--words", "256"}).code, kOk);
  EXPECT_EQ(slurp(path("t.bin")), data);
}

TEST_F(Cli, GenOptions) {
  ASSERT_EQ(kz({"gen", "--out", path("le.bin"), "--words", "10", "--k", "3", "--x0", "0.3"}).code, kOk);
  ASSERT_EQ(kz({"gen", "--out", path("be.bin"), "--words", "10", "--k", "3", "--x0", "0.3", "--byte-order", "big"})
                .code,
            kOk);
  auto le = slurp(path("le.bin")), be = slurp(path("be.bin"));
  ASSERT_EQ(le.size(), 40u);
  for (std::size_t w = 0; w < 10; ++w) {
    for (std::size_t b = 0; b < 4; ++b) EXPECT_EQ(le[4 * w + b], be[4 * w + 3 - b]);
  }
  ASSERT_EQ(kz({"keygen", "--out", path("k.key")}).code, kOk);
  ASSERT_EQ(kz({"gen", "--out", path("key.bin"), "--key", path("k.key"), "--words", "5"}).code, kOk);
  EXPECT_EQ(slurp(path("key.bin")).size(), 20u);
}

TEST_F(Cli, GenFailureLeavesNoPartialFile) {
  auto r = kz({"--precision", "decimal:32", "gen", "--out", path("s.bin"), "--mu", "2", "--x0", "0.25", "--words",
               "100", "--transient", "0"});
  EXPECT_EQ(r.code, kGeneration);
  EXPECT_FALSE(fs::exists(path("s.bin")));
  EXPECT_EQ(kz({"gen", "--out", path("s.bin"), "--byte-order", "middle"}).code, kConfig);
}

// --- analyze -----------------------------------------------------------------------------------------------

TEST_F(Cli, AnalyzeHist) {
  auto r = kz({"analyze", "--out-dir", path("out"), "--assert", "hist", "--k", "4", "--samples", "5000", "--bins",
               "50"});
  EXPECT_EQ(r.code, kOk) << r.out << r.err;
  EXPECT_TRUE(fs::exists(path("out/hist_k4.csv")));
  r = kz({"analyze", "--out-dir", path("out"), "--assert", "hist", "--k", "0", "--samples", "5000", "--bins", "50"});
  EXPECT_EQ(r.code, kAssertion) << r.out;
  EXPECT_NE(r.out.find("0/10 seeds uniform"), std::string::npos);
}

TEST_F(Cli, AnalyzeBif) {
  auto r = kz({"--threads", "2", "analyze", "--out-dir", path("out"), "bif", "--steps", "20", "--iters", "2000",
               "--x-bins", "30"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const std::string pgm = slurp(path("out/bif_k0.pgm"));
  EXPECT_EQ(pgm.substr(0, 13), "P5\n20 30\n255\n");
  EXPECT_EQ(pgm.size(), 13u + 600u);
  EXPECT_EQ(slurp(path("out/bif_k0.csv")).substr(0, 5), "mu,bi");
}

TEST_F(Cli, AnalyzeRetmap) {
  auto r = kz({"analyze", "--out-dir", path("out"), "--assert", "retmap", "--k", "4"});
  EXPECT_EQ(r.code, kOk) << r.out;
  // At mu = 4 the k = 0 orbit is linearly uncorrelated; only the parabola gives it away.
  r = kz({"analyze", "--out-dir", path("out"), "--assert", "retmap", "--k", "0", "--dims", "3"});
  EXPECT_EQ(r.code, kOk) << r.out;
  EXPECT_NE(r.out.find("max parabola deviation 0 "), std::string::npos);
  r = kz({"analyze", "--out-dir", path("out"), "--assert", "retmap", "--k", "0", "--mu", "3.8"});
  EXPECT_EQ(r.code, kAssertion) << r.out;
  EXPECT_EQ(slurp(path("out/retmap_k0.csv")).substr(0, 11), "t,z_t,z_t1\n");
}

TEST_F(Cli, AnalyzeKac) {
  auto r = kz({"analyze", "--out-dir", path("out"), "--assert", "kac", "--k", "4"});
  EXPECT_EQ(r.code, kOk) << r.out;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("out/kac_k4_site104.csv")));
  EXPECT_EQ(kz({"analyze", "kac", "--k", "2", "--out-dir", path("out")}).code, kConfig);
}

TEST_F(Cli, AnalyzeCipherdist) {
  auto r = kz({"--precision", "binary64", "--threads", "2", "analyze", "--out-dir", path("out"), "--assert",
               "cipherdist", "--plaintexts", "3", "--letters", "50"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("k=0 mean total"), std::string::npos);
  EXPECT_NE(r.out.find("baseline:mt19937_64"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("out/cipherdist.csv")));
  EXPECT_EQ(kz({"analyze", "cipherdist", "--k-set", "0,x", "--out-dir", path("out")}).code, kConfig);
  spit(path("tiny.bin"), std::string(16, 'a'));
  EXPECT_EQ(kz({"--precision", "binary64", "analyze", "--out-dir", path("out"), "cipherdist", "--plaintexts", "1",
                "--letters", "5", "--external", path("tiny.bin")})
                .code,
            kGeneration);
}

TEST_F(Cli, AnalyzeBattery) {
  auto r = kz({"--precision", "decimal:64", "--threads", "2", "analyze", "--out-dir", path("out"), "--assert",
               "battery", "--k", "5", "--seeds", "2", "--bits", "32000"});
  EXPECT_EQ(r.code, kOk) << r.out << r.err;
  r = kz({"--precision", "decimal:64", "analyze", "--out-dir", path("out"), "--assert", "battery", "--k", "0",
          "--seeds", "2", "--bits", "32000"});
  EXPECT_EQ(r.code, kAssertion) << r.out;
  EXPECT_TRUE(fs::exists(path("out/battery_k0.csv")));
  EXPECT_EQ(kz({"analyze", "battery", "--bits", "100", "--out-dir", path("out")}).code, kConfig);
}

// --- usage ----------------------------------------------------------------------------------------------------

TEST_F(Cli, HelpAndUsageErrors) {
  auto r = kz({"--help"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("keygen"), std::string::npos);
  EXPECT_EQ(kz({"analyze", "kac", "--help"}).code, kOk);
  EXPECT_EQ(kz({"--frobnicate"}).code, kUsage);
  EXPECT_EQ(kz({"gen", "--out", path("s"), "--words", "many"}).code, kUsage);
  EXPECT_EQ(kz({}).code, kUsage);
}

}  // namespace
}  // namespace kzoom::cli
