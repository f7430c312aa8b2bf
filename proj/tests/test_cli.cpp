#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "rumor_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int rumor(const std::string& args) {
    const std::string cmd =
        "cd " + workdir().string() + " && " + RUMOR_CLI + " " + args + " >>log.txt 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

}  // namespace

TEST_CASE("exit codes") {
    CHECK(rumor("--help") == 0);
    CHECK(rumor("") == 2);
    CHECK(rumor("no-such-command") == 2);
    CHECK(rumor("synth --events") == 2);
    CHECK(rumor("features") == 2);
    CHECK(rumor("evaluate --corpus x.jsonl --cutoffs 0") == 2);
    CHECK(rumor("fit-epi --corpus x.jsonl --model sir") == 2);
    CHECK(rumor("features --corpus missing.jsonl") == 3);
    write(workdir() / "broken.jsonl", "{\"v\": 1, \"event_id\":\n");
    CHECK(rumor("features --corpus broken.jsonl") == 3);
    CHECK(rumor("synth --events 6 --seed 1 --out tiny.jsonl") == 0);
    CHECK(rumor("train-credit --corpus tiny.jsonl --epochs 1 --learning-rate 1e300 --out bad.rmdl") == 4);
    CHECK(rumor("predict --dsts missing.csv --model-file none.rmdl") == 3);
}

TEST_CASE("config file: flag beats file beats default") {
    write(workdir() / "six.cfg", "# comment line\nevents = 6\nseed=2\n\nmargin=0.5   # trailing comment\n");
    REQUIRE(rumor("synth --config six.cfg --out from_file.jsonl") == 0);
    REQUIRE(rumor("synth --events 6 --seed 2 --margin 0.5 --out from_flags.jsonl") == 0);
    CHECK(slurp(workdir() / "from_file.jsonl") == slurp(workdir() / "from_flags.jsonl"));

    REQUIRE(rumor("synth --config six.cfg --seed 3 --out override.jsonl") == 0);
    REQUIRE(rumor("synth --events 6 --seed 3 --margin 0.5 --out flags3.jsonl") == 0);
    CHECK(slurp(workdir() / "override.jsonl") == slurp(workdir() / "flags3.jsonl"));

    REQUIRE(rumor("synth --seed 2 --events 6 --out defaults.jsonl") == 0);
    CHECK(slurp(workdir() / "defaults.jsonl") != slurp(workdir() / "from_file.jsonl"));

    write(workdir() / "shared.cfg", "events=6\ncutoffs=1,48\n");
    CHECK(rumor("synth --config shared.cfg --out shared.jsonl") == 0);
    write(workdir() / "unknown.cfg", "colour=blue\n");
    CHECK(rumor("synth --config unknown.cfg") == 2);
    write(workdir() / "garbled.cfg", "events 6\n");
    CHECK(rumor("synth --config garbled.cfg") == 2);
    CHECK(rumor("synth --config nowhere.cfg") == 2);
}

TEST_CASE("outputs land in --out-dir") {
    REQUIRE(rumor("--out-dir nested/deeper synth --events 4 --seed 5") == 0);
    CHECK(fs::exists(workdir() / "nested/deeper/corpus.jsonl"));
    REQUIRE(rumor("synth --events 4 --seed 5 --out-dir nested2") == 0);
    CHECK(slurp(workdir() / "nested/deeper/corpus.jsonl") == slurp(workdir() / "nested2/corpus.jsonl"));
}
