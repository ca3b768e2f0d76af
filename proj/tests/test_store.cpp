#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cloudcraft/store.hpp"

using namespace cloudcraft;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("cloudcraft-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(reinterpret_cast<uintptr_t>(this)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("versioned puts and reads") {
  JournalStore store;
  CHECK(store.put(Namespace::Orders, "o1", "doc") == 1);
  CHECK(store.put(Namespace::Orders, "o1", "doc2", 1) == 2);
  CHECK_THROWS_AS(store.put(Namespace::Orders, "o1", "doc3", 1), VersionConflict);

  auto rec = store.get(Namespace::Orders, "o1");
  CHECK(rec.value == "doc2");
  CHECK(rec.version == 2);

  CHECK(!store.try_get(Namespace::Orders, "missing").has_value());
  CHECK_THROWS_AS(store.get(Namespace::Orders, "missing"), NotFound);

  // expected 0 means "must not exist"
  CHECK(store.put(Namespace::Orders, "o2", "x", 0) == 1);
  CHECK_THROWS_AS(store.put(Namespace::Orders, "o2", "y", 0), VersionConflict);
}

TEST_CASE("scan_prefix returns sorted matches") {
  JournalStore store;
  store.put(Namespace::Printers, "p3", "c");
  store.put(Namespace::Printers, "p1", "a");
  store.put(Namespace::Printers, "p2", "b");
  store.put(Namespace::Orders, "exp-1", "e1");
  store.put(Namespace::Orders, "exp-2", "e2");
  store.put(Namespace::Orders, "web-1", "w");

  auto printers = store.scan_prefix(Namespace::Printers, "");
  REQUIRE(printers.size() == 3);
  CHECK(printers[0].first == "p1");
  CHECK(printers[2].first == "p3");

  auto exp = store.scan_prefix(Namespace::Orders, "exp-");
  CHECK(exp.size() == 2);

  CHECK(store.scan_prefix(Namespace::Users, "zzz").empty());
}

TEST_CASE("records survive restart and dump as ndjson") {
  TempDir dir;
  {
    JournalStore store(dir.path);
    store.put(Namespace::Users, "u1", "alice");
    store.put(Namespace::Users, "u1", "alice2", 1);
    store.put(Namespace::Billing, "txn:1", "{}");
  }
  JournalStore reopened(dir.path);
  auto rec = reopened.get(Namespace::Users, "u1");
  CHECK(rec.value == "alice2");
  CHECK(rec.version == 2);

  std::ostringstream out;
  reopened.dump(out);
  std::istringstream lines(out.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    CHECK(j.contains("namespace"));
    CHECK(j.contains("key"));
    CHECK(j.contains("version"));
    CHECK(j.contains("value"));
    ++count;
  }
  CHECK(count == 2);
}

TEST_CASE("writes serialize under concurrency") {
  JournalStore store;
  constexpr int kThreads = 8;
  constexpr int kWritesEach = 200;
  std::vector<std::thread> workers;
  for (int t = 0; t < kThreads; ++t)
    workers.emplace_back([&store] {
      for (int i = 0; i < kWritesEach; ++i) store.put(Namespace::Orders, "hot", "v");
    });
  for (auto& t : workers) t.join();
  CHECK(store.get(Namespace::Orders, "hot").version == kThreads * kWritesEach);
}
