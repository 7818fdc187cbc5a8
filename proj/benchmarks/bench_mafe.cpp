#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "mafe/gadget.hpp"
#include "mafe/gauss.hpp"
#include "mafe/scheme.hpp"
#include "mafe/trapdoor.hpp"

using namespace mafe;

namespace {

struct Desk
{
  GlobalParams gp;
  std::vector<AuthorityKeyPair> kps;
  std::vector<AuthorityPublicKey> pks;
};

const Desk& desk()
{
  static const Desk d = [] {
    Profile profile;
    profile.p = 16;
    Desk out{ global_setup(profile), {}, {} };
    auto rng = RngState::from_u64(1);
    for (const char* aid : { "a1", "a2", "a3" }) {
      out.kps.push_back(auth_setup(out.gp, aid, rng));
      out.pks.push_back(out.kps.back().pk);
    }
    return out;
  }();
  return d;
}

const std::vector<std::uint64_t> u = { 1, 2, 3, 4, 5, 6, 7, 8 };
const std::vector<std::uint64_t> v = { 8, 7, 6, 5, 4, 3, 2, 1 };

void BM_SampleZ(benchmark::State& state)
{
  const CdtSampler table(GaussParam(static_cast<double>(state.range(0))));
  auto rng = RngState::from_u64(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_z(table, rng));
  }
}
BENCHMARK(BM_SampleZ)->Arg(4)->Arg(20);

void BM_GadgetPreimage(benchmark::State& state)
{
  const Modulus q(std::uint64_t{ 1 } << 32);
  const GadgetSampler sampler(q, GaussParam(gadget_sampler_width));
  auto rng = RngState::from_u64(3);
  const ZqVector target = uniform_vector(q, 8, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.preimage(target, rng));
  }
}
BENCHMARK(BM_GadgetPreimage);

void BM_TrapGen(benchmark::State& state)
{
  const auto& gp = desk().gp;
  auto rng = RngState::from_u64(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trap_gen(gp.n(), gp.q(), gp.s_td(), rng));
  }
}
BENCHMARK(BM_TrapGen)->Unit(benchmark::kMillisecond);

void BM_SamplePre(benchmark::State& state)
{
  const auto& d = desk();
  auto rng = RngState::from_u64(5);
  const ZqVector target = uniform_vector(d.gp.q(), d.gp.n(), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(d.kps[0].msk.sampler->sample(target, rng));
  }
}
BENCHMARK(BM_SamplePre)->Unit(benchmark::kMicrosecond);

void BM_Keygen(benchmark::State& state)
{
  const auto& d = desk();
  auto rng = RngState::from_u64(6);
  const GlobalId gid = GlobalId::from_label("bench");
  for (auto _ : state) {
    benchmark::DoNotOptimize(keygen(d.gp, d.kps[0].pk, d.kps[0].msk, gid, v, rng));
  }
}
BENCHMARK(BM_Keygen)->Unit(benchmark::kMicrosecond);

void BM_Encrypt(benchmark::State& state)
{
  const auto& d = desk();
  auto rng = RngState::from_u64(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(encrypt(d.gp, d.pks, u, Mode::exact, rng));
  }
}
BENCHMARK(BM_Encrypt)->Unit(benchmark::kMicrosecond);

void BM_Decrypt(benchmark::State& state)
{
  const auto& d = desk();
  auto rng = RngState::from_u64(8);
  const GlobalId gid = GlobalId::from_label("bench");
  std::vector<FunctionalKeyShare> shares;
  for (const auto& kp : d.kps) {
    shares.push_back(keygen(d.gp, kp.pk, kp.msk, gid, v, rng));
  }
  const Ciphertext ct = encrypt(d.gp, d.pks, u, Mode::exact, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(decrypt(d.gp, shares, gid, v, ct));
  }
}
BENCHMARK(BM_Decrypt)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
