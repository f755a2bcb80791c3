#include "hermite_obs/multi_index.hpp"

#include <map>
#include <mutex>
#include <numeric>

#include "hermite_obs/numeric.hpp"

namespace hermite_obs {

MultiIndex::MultiIndex(std::vector<int> e) : entries(std::move(e)) {
  for (int v : entries)
    if (v < 0) throw DomainError("multi-index entries must be non-negative");
}

int MultiIndex::order() const { return std::accumulate(entries.begin(), entries.end(), 0); }

namespace {

void fill_degree(int n, int remaining, std::vector<int>& prefix, std::vector<MultiIndex>& out) {
  if (static_cast<int>(prefix.size()) == n - 1) {
    prefix.push_back(remaining);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    prefix.push_back(a);
    fill_degree(n, remaining - a, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_multiindices(int n, int N) {
  if (n < 1 || N < 0) throw DomainError("enumerate_multiindices requires n >= 1 and N >= 0");
  std::vector<MultiIndex> out;
  out.reserve(binomial(N + n, n));
  std::vector<int> prefix;
  for (int d = 0; d <= N; ++d) fill_degree(n, d, prefix, out);
  return out;
}

std::size_t binomial(int a, int b) {
  if (b < 0 || b > a) return 0;
  b = std::min(b, a - b);
  std::size_t r = 1;
  for (int i = 1; i <= b; ++i) r = r * static_cast<std::size_t>(a - b + i) / static_cast<std::size_t>(i);
  return r;
}

IndexSet::IndexSet(int n, int N) : n_(n), N_(N), list_(enumerate_multiindices(n, N)) {
  orders_.reserve(list_.size());
  lookup_.reserve(list_.size());
  for (std::size_t i = 0; i < list_.size(); ++i) {
    orders_.push_back(list_[i].order());
    lookup_.emplace(key(list_[i].entries), i);
  }
}

std::uint64_t IndexSet::key(const std::vector<int>& alpha) const {
  std::uint64_t k = 0;
  for (int v : alpha) k = k * static_cast<std::uint64_t>(N_ + 1) + static_cast<std::uint64_t>(v);
  return k;
}

std::optional<std::size_t> IndexSet::position(const std::vector<int>& alpha) const {
  if (static_cast<int>(alpha.size()) != n_) return std::nullopt;
  int s = 0;
  for (int v : alpha) {
    if (v < 0) return std::nullopt;
    s += v;
  }
  if (s > N_) return std::nullopt;
  auto it = lookup_.find(key(alpha));
  return it->second;
}

std::size_t IndexSet::prefix_size(int k) const {
  if (k < 0) return 0;
  if (k >= N_) return list_.size();
  return binomial(k + n_, n_);
}

std::shared_ptr<const IndexSet> index_set(int n, int N) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const IndexSet>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, N}];
  if (!slot) slot = std::make_shared<const IndexSet>(n, N);
  return slot;
}

}  // namespace hermite_obs
