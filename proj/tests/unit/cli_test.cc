// Copyright 2026 The Coolcodec Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "coolcodec/image.h"
#include "coolcodec_cli/cli.h"
#include "test_util.h"

namespace coolcodec {
namespace {

namespace fs = std::filesystem;
using testing::FixturePath;
using testing::ReadBytes;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("coolcodec_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    input_ = (dir_ / "in.ppm").string();
    SaveImage(testing::SyntheticImage(12, 20, 3), input_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int Exec(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::Run(args, out_, err_);
  }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::string input_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, EncodeIsDeterministicAndWritesReport) {
  const std::vector<std::string> common = {"--lambda", "0.001", "--seed", "7",
                                           "--iterations", "60"};
  std::vector<std::string> a = {"encode", input_, Path("a.cchc")};
  std::vector<std::string> b = {"encode", input_, Path("b.cchc")};
  a.insert(a.end(), common.begin(), common.end());
  b.insert(b.end(), common.begin(), common.end());
  ASSERT_EQ(Exec(a), cli::kExitOk) << err_.str();
  ASSERT_EQ(Exec(b), cli::kExitOk) << err_.str();
  EXPECT_EQ(ReadBytes(Path("a.cchc")), ReadBytes(Path("b.cchc")));

  const nlohmann::json report =
      nlohmann::json::parse(std::ifstream(Path("a.cchc.json")));
  for (const char* key : {"psnr_db", "bpp_total", "bpp_latent", "bpp_mlp",
                          "iterations", "seconds", "lambda", "seed"}) {
    EXPECT_TRUE(report.contains(key)) << key;
  }
  EXPECT_EQ(report["iterations"], 60);
  EXPECT_EQ(report["seed"], 7);
  EXPECT_EQ(report["lambda"], 0.001);
  EXPECT_DOUBLE_EQ(report["bpp_total"].get<double>(),
                   ReadBytes(Path("a.cchc")).size() * 8.0 / (12 * 20));
}

TEST_F(CliTest, DecodeThenEvalIsConsistent) {
  ASSERT_EQ(Exec({"encode", input_, Path("s.cchc"), "--quality", "3",
                  "--iterations", "60", "--report", Path("r.json")}),
            cli::kExitOk)
      << err_.str();
  EXPECT_TRUE(fs::exists(Path("r.json")));
  ASSERT_EQ(Exec({"decode", Path("s.cchc"), Path("rec.ppm"), "--threads", "2"}),
            cli::kExitOk)
      << err_.str();
  ASSERT_EQ(Exec({"eval", input_, Path("rec.ppm"), Path("s.cchc")}), cli::kExitOk)
      << err_.str();
  const nlohmann::json j = nlohmann::json::parse(out_.str());
  EXPECT_GT(j["psnr_db"].get<double>(), 0.0);
  const double total = j["bpp_total"].get<double>();
  EXPECT_GT(total, 0.0);
  EXPECT_NEAR(j["bpp_latent"].get<double>() + j["bpp_mlp"].get<double>() +
                  j["bpp_header"].get<double>(),
              total, 1e-12);
  // eval's bpp is the file size over the pixel count, exactly.
  EXPECT_EQ(total, fs::file_size(Path("s.cchc")) * 8.0 / (12 * 20));
  EXPECT_EQ(j["height"], 12);
  EXPECT_EQ(j["width"], 20);

  // PNG output goes through the same decoder.
  ASSERT_EQ(Exec({"decode", Path("s.cchc"), Path("rec.png")}), cli::kExitOk);
  EXPECT_EQ(LoadImage(Path("rec.png")), LoadImage(Path("rec.ppm")));
}

TEST_F(CliTest, InfoOnGoldenStream) {
  ASSERT_EQ(Exec({"info", FixturePath("golden_16.cchc").string()}), cli::kExitOk)
      << err_.str();
  const std::string text = out_.str();
  EXPECT_NE(text.find("H=16\n"), std::string::npos) << text;
  EXPECT_NE(text.find("W=16\n"), std::string::npos) << text;
  EXPECT_NE(text.find("L=7\n"), std::string::npos) << text;
  EXPECT_NE(text.find("C=12\n"), std::string::npos) << text;
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Exec({}), cli::kExitUsage);
  EXPECT_EQ(Exec({"transcode"}), cli::kExitUsage);
  EXPECT_EQ(Exec({"encode", input_}), cli::kExitUsage);
  EXPECT_EQ(Exec({"encode", input_, Path("x.cchc"), "--lambda", "0.001",
                  "--quality", "2"}),
            cli::kExitUsage);
  EXPECT_EQ(Exec({"encode", input_, Path("x.cchc"), "--quality", "9"}),
            cli::kExitUsage);
  EXPECT_EQ(Exec({"encode", input_, Path("x.cchc"), "--lambda", "-1"}),
            cli::kExitUsage);
  EXPECT_EQ(Exec({"encode", input_, Path("x.cchc"), "--width", "0"}),
            cli::kExitUsage);
  EXPECT_FALSE(fs::exists(Path("x.cchc")));
}

TEST_F(CliTest, IoErrors) {
  EXPECT_EQ(Exec({"encode", Path("missing.ppm"), Path("x.cchc")}), cli::kExitIo);
  EXPECT_EQ(Exec({"decode", Path("missing.cchc"), Path("x.ppm")}), cli::kExitIo);
  EXPECT_EQ(Exec({"info", Path("missing.cchc")}), cli::kExitIo);
  // Output directory that does not exist is rejected before any encoding.
  EXPECT_EQ(Exec({"encode", input_, Path("no/such/dir/x.cchc")}), cli::kExitIo);
  testing::WriteBytes(Path("junk.ppm"), {'P', '6', '\n', '1'});
  EXPECT_EQ(Exec({"encode", Path("junk.ppm"), Path("x.cchc")}), cli::kExitIo);
}

TEST_F(CliTest, CorruptStreams) {
  std::vector<uint8_t> golden = ReadBytes(FixturePath("golden_16.cchc"));
  golden.resize(golden.size() - 1);
  testing::WriteBytes(Path("trunc.cchc"), golden);
  EXPECT_EQ(Exec({"decode", Path("trunc.cchc"), Path("x.ppm")}),
            cli::kExitCorruptStream);
  EXPECT_EQ(Exec({"info", Path("trunc.cchc")}), cli::kExitCorruptStream);
  testing::WriteBytes(Path("magic.cchc"), {'N', 'O', 'P', 'E'});
  EXPECT_EQ(Exec({"decode", Path("magic.cchc"), Path("x.ppm")}),
            cli::kExitCorruptStream);
}

}  // namespace
}  // namespace coolcodec
