#include "fpp/shortest_path.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <utility>

#include "fpp/errors.hpp"

namespace fpp {

namespace {

constexpr double kMaxBucketWeight = 4096.0;

void prepare(const WeightField& field, SiteId source, DistanceField& out, double limit) {
  const auto n = field.lattice().num_sites();
  out.dist.assign(n, kInf);
  out.settled.clear();
  out.limit = limit;
  out.reached_boundary = false;
  out.dist[source] = 0.0;
}

void settle(const BoxLattice& lat, SiteId v, DistanceField& out) {
  out.settled.push_back(v);
  if (!out.reached_boundary && lat.on_boundary(lat.site(v))) out.reached_boundary = true;
}

// Shrinks the limit once the target (or every listed target) is settled.
class TargetWatch {
 public:
  TargetWatch(const SearchOptions& opts, std::size_t num_sites) : single_(opts.target) {
    if (!opts.targets.empty()) {
      wanted_.assign(num_sites, 0);
      for (SiteId t : opts.targets) {
        if (t >= num_sites) throw DomainError("single_source: bad target");
        if (!wanted_[t]) ++remaining_;
        wanted_[t] = 1;
      }
    }
  }

  void on_settle(SiteId v, double d, double& limit) {
    if (single_ && v == *single_) limit = std::min(limit, d);
    if (remaining_ > 0 && wanted_[v]) {
      wanted_[v] = 0;
      if (--remaining_ == 0) limit = std::min(limit, d);
    }
  }

 private:
  std::optional<SiteId> single_;
  std::vector<std::uint8_t> wanted_;
  std::size_t remaining_ = 0;
};

void run_heap(const WeightField& field, SiteId source, const SearchOptions& opts,
              DistanceField& out) {
  const BoxLattice& lat = field.lattice();
  const auto w = field.stored();
  using Item = std::pair<double, SiteId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  queue.push({0.0, source});
  double limit = opts.limit;
  TargetWatch watch(opts, lat.num_sites());
  std::array<std::pair<SiteId, EdgeId>, 4> nb;
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d != out.dist[v]) continue;
    if (d > limit) break;
    settle(lat, v, out);
    watch.on_settle(v, d, limit);
    const int k = lat.neighbours(v, nb);
    for (int i = 0; i < k; ++i) {
      const double nd = d + w[nb[i].second];
      if (nd < out.dist[nb[i].first]) {
        out.dist[nb[i].first] = nd;
        queue.push({nd, nb[i].first});
      }
    }
  }
  out.limit = limit;
}

void run_bucket(const WeightField& field, SiteId source, const SearchOptions& opts,
                DistanceField& out, double max_weight) {
  const BoxLattice& lat = field.lattice();
  const auto w = field.stored();
  const auto nb_count = static_cast<std::size_t>(max_weight) + 1;
  std::vector<std::vector<SiteId>> buckets(nb_count);
  buckets[0].push_back(source);
  std::size_t pending = 1;
  double limit = opts.limit;
  std::uint64_t cur = 0;
  TargetWatch watch(opts, lat.num_sites());
  std::array<std::pair<SiteId, EdgeId>, 4> nb;
  while (pending > 0) {
    auto& bucket = buckets[cur % nb_count];
    if (bucket.empty()) {
      ++cur;
      continue;
    }
    const double d = static_cast<double>(cur);
    if (d > limit) break;
    const SiteId v = bucket.back();
    bucket.pop_back();
    --pending;
    if (out.dist[v] != d) continue;
    settle(lat, v, out);
    watch.on_settle(v, d, limit);
    const int k = lat.neighbours(v, nb);
    for (int i = 0; i < k; ++i) {
      const double nd = d + w[nb[i].second];
      const SiteId u = nb[i].first;
      if (nd < out.dist[u]) {
        out.dist[u] = nd;
        buckets[static_cast<std::uint64_t>(nd) % nb_count].push_back(u);
        ++pending;
      }
    }
  }
  out.limit = limit;
}

}  // namespace

void single_source(const WeightField& field, SiteId source, const SearchOptions& opts,
                   DistanceField& out) {
  if (source >= field.lattice().num_sites()) throw DomainError("single_source: bad source");
  prepare(field, source, out, opts.limit);

  Engine engine = opts.engine;
  const double max_weight = field.max_stored();
  if (engine == Engine::automatic)
    engine = (field.exact() && max_weight <= kMaxBucketWeight) ? Engine::bucket : Engine::heap;
  if (engine == Engine::bucket) {
    if (!field.exact() || max_weight > kMaxBucketWeight)
      throw DomainError("single_source: bucket engine needs small integer weights");
    run_bucket(field, source, opts, out, max_weight);
  } else {
    run_heap(field, source, opts, out);
  }
}

}  // namespace fpp
