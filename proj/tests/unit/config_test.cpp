// Copyright 2026 The magnet Authors.
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

#include "doctest.h"
#include "magnet/config.hpp"
#include "magnet/errors.hpp"

using namespace magnet;

TEST_CASE("default hyper-parameters") {
  const MagnetConfig c;
  CHECK(c.vocab_size == 20000);
  CHECK(c.embed_dim == 768);
  CHECK(c.hidden == 250);
  CHECK(c.heads == 4);
  CHECK(c.lr == 1e-3);
  CHECK(c.batch_size == 250);
  CHECK(c.dropout == 0.5);
  CHECK(c.clip_norm == 10.0);
  CHECK(c.epochs == 50);
  CHECK(c.patience == 10);
  CHECK(c.max_tokens == 400);
  CHECK(c.adjacency == AdjacencyInit::kXavier);
  CHECK(c.layer_widths(768) == std::vector<std::size_t>{768, 500, 500});
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("text round trip") {
  MagnetConfig c;
  c.set("lr", "0.0123");
  c.set("graph_dims", "7, 9");
  c.set("adjacency", "cooccurrence");
  c.set("layer_mode", "gcn");
  c.set("softmax_attention", "false");
  MagnetConfig d;
  parse_config_text(c.to_text(), d);
  CHECK(d.to_text() == c.to_text());
  CHECK(d.graph_dims == std::vector<std::size_t>{7, 9});
  CHECK(d.layer_widths(4) == std::vector<std::size_t>{4, 7, 9, 500});
  d.set("graph_dims", "");
  CHECK(d.layer_widths(4) == std::vector<std::size_t>{4, 500});
}

TEST_CASE("comments and whitespace") {
  MagnetConfig c;
  parse_config_text("# header\n  hidden = 8   # trailing\n\nheads=2\n", c);
  CHECK(c.hidden == 8);
  CHECK(c.heads == 2);
}

TEST_CASE("errors carry the source location") {
  MagnetConfig c;
  try {
    parse_config_text("hidden=8\nbogus=1\n", c, "run.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("run.cfg:2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("hidden\n", c), ConfigError);
  CHECK_THROWS_AS(c.set("hidden", "-3"), ConfigError);
  CHECK_THROWS_AS(c.set("dropout", "abc"), ConfigError);
  CHECK_THROWS_AS(c.set("adjacency", "spiral"), ConfigError);
  CHECK_THROWS_AS(c.get("nope"), ConfigError);
  CHECK_THROWS_AS(load_config_file("/nonexistent/x.cfg", c), IoError);
}

TEST_CASE("validation") {
  MagnetConfig c;
  c.dropout = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = MagnetConfig{};
  c.heads = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = MagnetConfig{};
  c.vocab_size = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("file round trip") {
  const auto path = std::filesystem::temp_directory_path() / "magnet_cfg_rt.txt";
  MagnetConfig c;
  c.seed = 99;
  c.lr = 0.1 + 0.2;
  write_config_file(path, c);
  MagnetConfig d;
  load_config_file(path, d);
  CHECK(d.seed == 99);
  CHECK(d.lr == c.lr);
}
