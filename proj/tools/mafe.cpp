// mafe: command-line front end for multi-authority attribute-based inner-product FE.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mafe/errors.hpp"
#include "mafe/gadget.hpp"
#include "mafe/game.hpp"
#include "mafe/scheme.hpp"
#include "mafe/serialize.hpp"
#include "mafe/trapdoor.hpp"

namespace {

using json = nlohmann::json;

enum ExitCode : int
{
  exit_ok = 0,
  exit_usage = 1,
  exit_validation = 2,
  exit_io = 3,
  exit_policy = 4,
};

std::uint64_t parse_u64(const std::string& text, const std::string& what)
{
  std::uint64_t x = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw mafe::ValidationError(what + ": '" + text + "' is not a non-negative decimal integer");
  }
  return x;
}

// One decimal integer per line; blank lines are ignored.
std::vector<std::uint64_t> read_vector_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) {
    throw mafe::IoError("cannot open '" + path + "' for reading");
  }
  std::vector<std::uint64_t> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      continue;
    }
    const auto last = line.find_last_not_of(" \t\r");
    out.push_back(parse_u64(line.substr(first, last - first + 1), path + ":" + std::to_string(lineno)));
  }
  return out;
}

mafe::GlobalId parse_gid(const std::string& text)
{
  const bool is_hex = text.size() == 2 * mafe::GlobalId::size &&
                      std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isxdigit(c) != 0; });
  return is_hex ? mafe::GlobalId::from_hex(text) : mafe::GlobalId::from_label(text);
}

mafe::RngState make_rng(const std::string& seed)
{
  if (seed.empty()) {
    return mafe::RngState::from_os_entropy();
  }
  if (seed.size() == 64) {
    return mafe::RngState(mafe::GlobalId::from_hex(seed).bytes());
  }
  return mafe::RngState::from_u64(parse_u64(seed, "--seed"));
}

mafe::GlobalParams load_gp(const std::string& path)
{
  return mafe::deserialize_gp(mafe::read_file(path));
}

void save(const std::string& path, const mafe::Bytes& bytes)
{
  mafe::write_file_atomic(path, bytes);
  std::cerr << "wrote " << path << "\n";
}

std::int64_t centered_error(std::uint64_t got, std::uint64_t want, std::uint64_t modulus)
{
  const std::uint64_t diff = got >= want ? got - want : got + modulus - want;
  return diff > modulus / 2 ? static_cast<std::int64_t>(diff) - static_cast<std::int64_t>(modulus)
                            : static_cast<std::int64_t>(diff);
}

mafe::AuthoritySet read_set(const json& j, const char* key)
{
  mafe::AuthoritySet out;
  for (const auto& x : j.at(key)) {
    out.insert(x.get<std::string>());
  }
  return out;
}

mafe::ZqVector read_zq(const json& j, const char* key, const mafe::GlobalParams& gp)
{
  const auto raw = j.at(key).get<std::vector<std::uint64_t>>();
  if (raw.size() != gp.n()) {
    throw mafe::DimensionError(std::string(key) + " must have " + std::to_string(gp.n()) + " entries");
  }
  for (const auto x : raw) {
    if (x >= gp.q().value()) {
      throw mafe::ValidationError(std::string(key) + " holds an entry outside [0, q)");
    }
  }
  return mafe::ZqVector(gp.q(), raw);
}

json read_json(const std::string& path)
{
  std::ifstream in(path);
  if (!in) {
    throw mafe::IoError("cannot open '" + path + "' for reading");
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw mafe::ValidationError(path + ": " + e.what());
  }
}

struct SelftestCheck
{
  const char* name;
  std::function<bool()> run;
};

int run_selftest(std::uint64_t seed)
{
  auto rng = mafe::RngState::from_u64(seed);
  mafe::Profile desk;
  mafe::Profile exact = desk;
  exact.p = 16;

  const std::vector<SelftestCheck> checks = {
    { "gadget identity",
      [&] {
        for (const unsigned k : { 4U, 16U, 32U }) {
          const mafe::Modulus q(std::uint64_t{ 1 } << k);
          for (int t = 0; t < 100; ++t) {
            const auto x = mafe::uniform_vector(q, 8, rng);
            if (mafe::gadget_apply(mafe::gadget_decompose(x), 8, q) != x) {
              return false;
            }
          }
        }
        return true;
      } },
    { "trapdoor relation and preimage exactness",
      [&] {
        const mafe::Modulus q(std::uint64_t{ 1 } << 32);
        for (int t = 0; t < 3; ++t) {
          const auto [tm, td] = mafe::trap_gen(8, q, mafe::GaussParam(4.0), rng);
          if (!mafe::check_trapdoor_relation(tm, td)) {
            return false;
          }
          const mafe::PreimageSampler sampler(tm, td, mafe::GaussParam(1.2 * mafe::gadget_sampler_width * td.s1 + 1.0));
          for (int i = 0; i < 10; ++i) {
            const auto y = mafe::uniform_vector(q, 8, rng);
            if (mafe::mat_vec_mul(tm.a, sampler.sample(y, rng)) != y) {
              return false;
            }
          }
        }
        return true;
      } },
    { "noisy and exact round trips",
      [&] {
        for (const auto& profile : { desk, exact }) {
          const auto gp = mafe::global_setup(profile);
          std::vector<mafe::AuthorityKeyPair> kps;
          std::vector<mafe::AuthorityPublicKey> pks;
          for (const char* aid : { "a", "b", "c" }) {
            kps.push_back(mafe::auth_setup(gp, aid, rng));
            pks.push_back(kps.back().pk);
          }
          const std::uint64_t bound = gp.p().value_or(gp.q().value());
          for (int t = 0; t < 5; ++t) {
            std::vector<std::uint64_t> u(gp.n());
            std::vector<std::uint64_t> v(gp.n());
            for (std::size_t i = 0; i < gp.n(); ++i) {
              u[i] = rng.uniform_below(bound);
              v[i] = rng.uniform_below(bound);
            }
            const auto gid = mafe::GlobalId::from_label("selftest-" + std::to_string(t));
            std::vector<mafe::FunctionalKeyShare> shares;
            for (const auto& kp : kps) {
              shares.push_back(mafe::keygen(gp, kp.pk, kp.msk, gid, v, rng));
            }
            const auto ct = mafe::encrypt(gp, pks, u, gp.mode(), rng);
            const std::uint64_t gamma = mafe::decrypt(gp, shares, gid, v, ct);
            std::uint64_t uv = 0;
            for (std::size_t i = 0; i < gp.n(); ++i) {
              uv = static_cast<std::uint64_t>((static_cast<mafe::u128>(u[i]) * v[i] + uv) % bound);
            }
            const std::int64_t err = centered_error(gamma, uv, bound);
            const auto mag = static_cast<std::uint64_t>(err < 0 ? -err : err);
            if (gp.mode() == mafe::Mode::exact ? mag != 0 : mag > gp.b0()) {
              return false;
            }
          }
        }
        return true;
      } },
    { "serialization round trip",
      [&] {
        const auto gp = mafe::global_setup(desk);
        const auto kp = mafe::auth_setup(gp, "a", rng);
        const auto gp2 = mafe::deserialize_gp(mafe::serialize(gp));
        const auto pk_bytes = mafe::serialize(gp, kp.pk);
        return gp2 == gp && mafe::serialize(gp2, mafe::deserialize_pk(pk_bytes, gp2)) == pk_bytes;
      } },
  };

  bool all = true;
  for (const auto& c : checks) {
    bool ok = false;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      std::cerr << c.name << ": " << e.what() << "\n";
    }
    std::cout << (ok ? "PASS " : "FAIL ") << c.name << "\n";
    all = all && ok;
  }
  return all ? exit_ok : exit_validation;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "Multi-authority attribute-based inner-product functional encryption" };
  app.require_subcommand(1);

  mafe::Profile profile;
  std::optional<std::uint64_t> p;
  std::string out;
  auto* gp_setup = app.add_subcommand("gp-setup", "Create global parameters");
  gp_setup->add_option("--lambda", profile.lambda, "Security parameter")->capture_default_str();
  gp_setup->add_option("--n", profile.n, "Lattice dimension")->capture_default_str();
  gp_setup->add_option("--log-q", profile.log_q, "q = 2^log-q")->capture_default_str();
  gp_setup->add_option("--m-prime", profile.m_prime, "Oracle output length m'")->capture_default_str();
  gp_setup->add_option("--chi", profile.chi, "Encryption noise width")->capture_default_str();
  gp_setup->add_option("--chi-prime", profile.chi_prime, "Oracle width")->capture_default_str();
  gp_setup->add_option("--s-td", profile.s_td, "Trapdoor width")->capture_default_str();
  gp_setup->add_option("--max-authorities", profile.max_authorities, "Bound on the attribute-set size")
    ->capture_default_str();
  gp_setup->add_option("--p", p, "Plaintext modulus (selects the noiseless scheme)");
  gp_setup->add_option("--out", out, "Output file")->required();

  std::string gp_path, aid, seed, pk_path, msk_path, gid_text, v_path, u_path, ct_path, expected_path, mode_text;
  std::string setup_path, query_path;
  std::vector<std::string> pk_paths, sk_paths;

  auto* auth = app.add_subcommand("auth-setup", "Create an authority key pair");
  auth->add_option("--gp", gp_path)->required();
  auth->add_option("--aid", aid, "Authority identifier")->required();
  auth->add_option("--out", out, "Output prefix; writes PREFIX.pk and PREFIX.msk.SECRET")->required();
  auth->add_option("--seed", seed, "Decimal u64 or 64 hex digits; default OS entropy");

  auto* kg = app.add_subcommand("keygen", "Issue a functional key share");
  kg->add_option("--gp", gp_path)->required();
  kg->add_option("--pk", pk_path)->required();
  kg->add_option("--msk", msk_path)->required();
  kg->add_option("--gid", gid_text, "Label, or 64 hex digits")->required();
  kg->add_option("--v", v_path, "Key vector file")->required();
  kg->add_option("--out", out, "Output prefix; writes PREFIX.sk.SECRET")->required();
  kg->add_option("--seed", seed);

  auto* enc = app.add_subcommand("encrypt", "Encrypt under a set of authorities");
  enc->add_option("--gp", gp_path)->required();
  enc->add_option("--pk", pk_paths, "Authority public keys (repeatable)")->required();
  enc->add_option("--u", u_path, "Plaintext vector file")->required();
  enc->add_option("--mode", mode_text, "noisy or exact; defaults to the mode of gp")
    ->check(CLI::IsMember({ "noisy", "exact" }));
  enc->add_option("--out", out)->required();
  enc->add_option("--seed", seed);

  auto* dec = app.add_subcommand("decrypt", "Decrypt with key shares");
  dec->add_option("--gp", gp_path)->required();
  dec->add_option("--sk", sk_paths, "Key shares (repeatable)")->required();
  dec->add_option("--gid", gid_text)->required();
  dec->add_option("--v", v_path)->required();
  dec->add_option("--ct", ct_path)->required();
  dec->add_option("--expected", expected_path, "Plaintext file; prints the centered error on stderr");

  auto* cls = app.add_subcommand("classify", "Classify game queries");
  cls->add_option("--gp", gp_path)->required();
  cls->add_option("--setup", setup_path, "Game setup JSON")->required();
  cls->add_option("--query", query_path, "Query JSON (object or array)")->required();

  std::uint64_t selftest_seed = 1;
  auto* st = app.add_subcommand("selftest", "Run the fast self-test tier");
  st->add_option("--seed", selftest_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*gp_setup) {
      profile.p = p;
      const auto gp = mafe::global_setup(profile);
      for (const auto& w : gp.warnings()) {
        std::cerr << "warning: " << w << "\n";
      }
      save(out, mafe::serialize(gp));
      std::cerr << "m = " << gp.m() << ", m_A = " << gp.m_a() << ", key width = " << gp.key_width().s()
                << ", B0 = " << gp.b0() << "\n";
    } else if (*auth) {
      const auto gp = load_gp(gp_path);
      auto rng = make_rng(seed);
      const auto kp = mafe::auth_setup(gp, aid, rng);
      save(out + ".pk", mafe::serialize(gp, kp.pk));
      save(out + ".msk.SECRET", mafe::serialize(gp, kp.msk));
    } else if (*kg) {
      const auto gp = load_gp(gp_path);
      const auto pk = mafe::deserialize_pk(mafe::read_file(pk_path), gp);
      const auto msk = mafe::deserialize_msk(mafe::read_file(msk_path), gp);
      auto rng = make_rng(seed);
      const auto share = mafe::keygen(gp, pk, msk, parse_gid(gid_text), read_vector_file(v_path), rng);
      save(out + ".sk.SECRET", mafe::serialize(gp, share));
    } else if (*enc) {
      const auto gp = load_gp(gp_path);
      std::vector<mafe::AuthorityPublicKey> pks;
      for (const auto& path : pk_paths) {
        pks.push_back(mafe::deserialize_pk(mafe::read_file(path), gp));
      }
      const mafe::Mode mode = mode_text.empty() ? gp.mode() : (mode_text == "exact" ? mafe::Mode::exact : mafe::Mode::noisy);
      auto rng = make_rng(seed);
      save(out, mafe::serialize(gp, mafe::encrypt(gp, pks, read_vector_file(u_path), mode, rng)));
    } else if (*dec) {
      const auto gp = load_gp(gp_path);
      std::vector<mafe::FunctionalKeyShare> shares;
      for (const auto& path : sk_paths) {
        shares.push_back(mafe::deserialize_sk(mafe::read_file(path), gp));
      }
      const auto ct = mafe::deserialize_ct(mafe::read_file(ct_path), gp);
      const auto v = read_vector_file(v_path);
      const std::uint64_t gamma = mafe::decrypt(gp, shares, parse_gid(gid_text), v, ct);
      std::cout << gamma << "\n";
      if (!expected_path.empty()) {
        const auto u = read_vector_file(expected_path);
        if (u.size() != v.size()) {
          throw mafe::DimensionError("expected plaintext has length " + std::to_string(u.size()));
        }
        const std::uint64_t modulus = gp.p().value_or(gp.q().value());
        std::uint64_t uv = 0;
        for (std::size_t i = 0; i < u.size(); ++i) {
          uv = static_cast<std::uint64_t>((static_cast<mafe::u128>(u[i] % modulus) * v[i] + uv) % modulus);
        }
        std::cerr << "expected " << uv << ", centered error " << centered_error(gamma, uv, modulus) << "\n";
      }
    } else if (*cls) {
      const auto gp = load_gp(gp_path);
      const json sj = read_json(setup_path);
      const json qj = read_json(query_path);
      try {
        const mafe::GameSetup setup{ read_set(sj, "corrupt"),   read_set(sj, "honest"),
                                     read_set(sj, "challenge"), read_zq(sj, "u0", gp),
                                     read_zq(sj, "u1", gp),     sj.at("b1").get<std::uint64_t>() };
        std::vector<mafe::Query> queries;
        for (const auto& q : qj.is_array() ? qj : json::array({ qj })) {
          queries.push_back(
            mafe::Query{ parse_gid(q.at("gid").get<std::string>()), read_set(q, "attrs"), read_zq(q, "v", gp) });
        }
        if (const auto v = mafe::setup_violation(setup); !v.empty()) {
          throw mafe::ValidationError("game setup: " + v);
        }
        for (const auto& q : queries) {
          std::cout << mafe::query_type_name(mafe::classify_query(setup, q)) << "\n";
        }
        const auto report = mafe::check_admissible(setup, queries);
        std::cerr << (report.admissible ? std::string("query set is admissible")
                                        : "query set is not admissible: " + report.violation)
                  << "\n";
      } catch (const json::exception& e) {
        throw mafe::ValidationError(std::string("malformed game JSON: ") + e.what());
      }
    } else if (*st) {
      return run_selftest(selftest_seed);
    }
  } catch (const mafe::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_io;
  } catch (const mafe::PolicyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_policy;
  } catch (const mafe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  }
  return exit_ok;
}
