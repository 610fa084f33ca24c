#include "symrank/ffield.hpp"

#include <algorithm>
#include <thread>

#include "symrank/errors.hpp"

namespace symrank {

namespace {

using Word = std::uint32_t;

// Row-major rows x cols matrix, destroyed in place. Returns its rank.
int eliminate(Word* a, int rows, int cols, const PrimeField& field) {
  const Word p = static_cast<Word>(field.modulus());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pivot = r;
    while (pivot < rows && a[pivot * cols + c] == 0) {
      ++pivot;
    }
    if (pivot == rows) {
      continue;
    }
    Word* prow = a + r * cols;
    if (pivot != r) {
      std::swap_ranges(prow + c, prow + cols, a + pivot * cols + c);
    }
    const Word inv = field.inverse(prow[c]);
    for (int j = c; j < cols; ++j) {
      prow[j] = prow[j] * inv % p;
    }
    for (int i = r + 1; i < rows; ++i) {
      Word* row = a + i * cols;
      const Word f = row[c];
      if (f == 0) {
        continue;
      }
      const Word neg = p - f;
      for (int j = c; j < cols; ++j) {
        row[j] = (row[j] + neg * prow[j]) % p;
      }
    }
    ++r;
  }
  return r;
}

std::uint64_t ipow(std::uint64_t base, std::size_t exp) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    out *= base;
  }
  return out;
}

// (row, col) of each packed upper-triangle slot.
std::vector<std::pair<int, int>> packed_positions(int n) {
  std::vector<std::pair<int, int>> pos;
  pos.reserve(SymMatrix::packed_size(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      pos.emplace_back(i, j);
    }
  }
  return pos;
}

// Odometer over packed entries that keeps a dense copy in sync. The slot at
// `offset + t` of the dense matrix is written for digit t.
class Odometer {
public:
  Odometer(std::vector<std::pair<int, int>> positions, int stride, int p)
      : positions_(std::move(positions)), digits_(positions_.size(), 0), stride_(stride),
        p_(static_cast<Word>(p)) {}

  // Sets the digits to the base-p expansion of `index`, last digit least
  // significant, and writes them into `dense`.
  void seek(std::uint64_t index, Word* dense) {
    for (std::size_t t = digits_.size(); t-- > 0;) {
      digits_[t] = static_cast<Word>(index % p_);
      index /= p_;
      write(t, dense);
    }
  }

  void advance(Word* dense) {
    for (std::size_t t = digits_.size(); t-- > 0;) {
      if (++digits_[t] == p_) {
        digits_[t] = 0;
        write(t, dense);
      } else {
        write(t, dense);
        return;
      }
    }
  }

private:
  void write(std::size_t t, Word* dense) const {
    const auto [i, j] = positions_[t];
    dense[i * stride_ + j] = digits_[t];
    dense[j * stride_ + i] = digits_[t];
  }

  std::vector<std::pair<int, int>> positions_;
  std::vector<Word> digits_;
  int stride_;
  Word p_;
};

void count_range(int n, const PrimeField& field, std::uint64_t begin, std::uint64_t end,
                 std::vector<std::uint64_t>& counts) {
  if (begin >= end) {
    return;
  }
  const std::size_t cells = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  std::vector<Word> dense(cells, 0);
  std::vector<Word> work(cells, 0);
  Odometer odo(packed_positions(n), n, field.modulus());
  odo.seek(begin, dense.data());
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    std::copy(dense.begin(), dense.end(), work.begin());
    ++counts[static_cast<std::size_t>(eliminate(work.data(), n, n, field))];
    odo.advance(dense.data());
  }
}

// `dense` is n x n with rows/cols 1..n-1 holding the minor; the first row
// and column are overwritten while cycling through all p^n completions.
void count_completions(int n, const PrimeField& field, std::vector<Word>& dense,
                       std::vector<Word>& work, std::vector<std::uint64_t>& counts) {
  std::vector<std::pair<int, int>> first_row;
  for (int j = 0; j < n; ++j) {
    first_row.emplace_back(0, j);
  }
  Odometer odo(std::move(first_row), n, field.modulus());
  odo.seek(0, dense.data());
  const std::uint64_t total = ipow(static_cast<std::uint64_t>(field.modulus()),
                                   static_cast<std::size_t>(n));
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::copy(dense.begin(), dense.end(), work.begin());
    ++counts[static_cast<std::size_t>(eliminate(work.data(), n, n, field))];
    odo.advance(dense.data());
  }
}

template <typename Fn>
void run_parts(std::size_t parts, unsigned threads, Fn&& body) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(parts)));
  if (threads == 1) {
    for (std::size_t i = 0; i < parts; ++i) {
      body(i);
    }
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      for (std::size_t i = t; i < parts; i += threads) {
        body(i);
      }
    });
  }
}

void require_size(int n) {
  if (n < 0) {
    throw InvalidArgument("matrix size must be >= 0, got " + std::to_string(n));
  }
}

} // namespace

PrimeField::PrimeField(int p) : p_(p) {
  if (!is_supported_modulus(p)) {
    throw OddPrimeRequired(p);
  }
  inverse_.assign(static_cast<std::size_t>(p), 0);
  for (int x = 1; x < p; ++x) {
    for (int y = 1; y < p; ++y) {
      if (x * y % p == 1) {
        inverse_[static_cast<std::size_t>(x)] = static_cast<std::uint32_t>(y);
        break;
      }
    }
  }
}

bool PrimeField::is_supported_modulus(long long q) {
  if (q < 3 || q > 97 || q % 2 == 0) {
    return false;
  }
  for (long long d = 3; d * d <= q; d += 2) {
    if (q % d == 0) {
      return false;
    }
  }
  return true;
}

SymMatrix::SymMatrix(int n) : n_(n) {
  require_size(n);
  entries_.assign(packed_size(n), 0);
}

SymMatrix::SymMatrix(int n, std::vector<Entry> packed, const PrimeField& field)
    : n_(n), entries_(std::move(packed)) {
  require_size(n);
  if (entries_.size() != packed_size(n)) {
    throw InvalidArgument("packed symmetric " + std::to_string(n) + "x" + std::to_string(n) +
                          " matrix needs " + std::to_string(packed_size(n)) + " entries");
  }
  for (auto e : entries_) {
    if (e >= field.modulus()) {
      throw InvalidArgument("entry " + std::to_string(e) + " is not reduced mod " +
                            std::to_string(field.modulus()));
    }
  }
}

SymMatrix SymMatrix::identity(int n) {
  SymMatrix m(n);
  for (int i = 0; i < n; ++i) {
    m.entries_[m.index(i, i)] = 1;
  }
  return m;
}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<int>>& rows,
                               const PrimeField& field) {
  const int n = static_cast<int>(rows.size());
  std::vector<Entry> packed;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n) {
      throw InvalidArgument("matrix rows must form a square");
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const int x = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (x != rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]) {
        throw InvalidArgument("matrix is not symmetric");
      }
      if (x < 0 || x >= field.modulus()) {
        throw InvalidArgument("entry " + std::to_string(x) + " is not reduced");
      }
      packed.push_back(static_cast<Entry>(x));
    }
  }
  return SymMatrix(n, std::move(packed), field);
}

std::size_t SymMatrix::index(int i, int j) const {
  if (i > j) {
    std::swap(i, j);
  }
  const auto ui = static_cast<std::size_t>(i);
  return ui * static_cast<std::size_t>(n_) - ui * (ui - 1) / 2 + static_cast<std::size_t>(j - i);
}

SymMatrix::Entry SymMatrix::at(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw InvalidArgument("index out of range");
  }
  return entries_[index(i, j)];
}

SymMatrix SymMatrix::minor() const {
  if (n_ == 0) {
    throw InvalidArgument("the 0x0 matrix has no (1,1) minor");
  }
  SymMatrix m(n_ - 1);
  for (int i = 1; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      m.entries_[m.index(i - 1, j - 1)] = entries_[index(i, j)];
    }
  }
  return m;
}

void for_each_matrix(int n, const PrimeField& field, std::uint64_t budget,
                     const std::function<void(const SymMatrix&)>& visit) {
  require_size(n);
  const mpz_class size = space_size(n, field.modulus());
  require_budget(size, budget);
  const auto p = static_cast<SymMatrix::Entry>(field.modulus());
  std::vector<SymMatrix::Entry> digits(SymMatrix::packed_size(n), 0);
  for (std::uint64_t idx = 0, end = size.get_ui(); idx < end; ++idx) {
    visit(SymMatrix(n, digits, field));
    for (std::size_t t = digits.size(); t-- > 0;) {
      if (++digits[t] == p) {
        digits[t] = 0;
      } else {
        break;
      }
    }
  }
}

int rank(const SymMatrix& m, const PrimeField& field) {
  const int n = m.size();
  std::vector<Word> dense(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      dense[static_cast<std::size_t>(i * n + j)] = m.at(i, j);
    }
  }
  return eliminate(dense.data(), n, n, field);
}

std::uint64_t RankHistogram::total() const {
  std::uint64_t t = 0;
  for (auto c : counts) {
    t += c;
  }
  return t;
}

std::string RankHistogram::to_csv(bool header) const {
  std::string out = header ? "n,p,k,count\n" : "";
  for (std::size_t k = 0; k < counts.size(); ++k) {
    out += std::to_string(n) + "," + std::to_string(p) + "," + std::to_string(k) + "," +
           std::to_string(counts[k]) + "\n";
  }
  return out;
}

nlohmann::json RankHistogram::to_json() const {
  return {{"n", n}, {"p", p}, {"counts", counts}};
}

std::uint64_t FiberCensus::total() const {
  std::uint64_t t = 0;
  for (const auto& [key, c] : table) {
    t += c;
  }
  return t;
}

std::uint64_t FiberCensus::at(int minor_rank, int full_rank) const {
  auto it = table.find({minor_rank, full_rank});
  return it == table.end() ? 0 : it->second;
}

std::vector<std::uint64_t> FiberCensus::full_rank_marginal() const {
  std::vector<std::uint64_t> out(static_cast<std::size_t>(n + 1), 0);
  for (const auto& [key, c] : table) {
    out[static_cast<std::size_t>(key.second)] += c;
  }
  return out;
}

std::vector<std::uint64_t> FiberCensus::minor_rank_marginal() const {
  std::vector<std::uint64_t> out(static_cast<std::size_t>(std::max(n, 1)), 0);
  for (const auto& [key, c] : table) {
    out[static_cast<std::size_t>(key.first)] += c;
  }
  return out;
}

std::string FiberCensus::to_csv(bool header) const {
  std::string out = header ? "n,p,minor_rank,full_rank,count\n" : "";
  for (const auto& [key, c] : table) {
    out += std::to_string(n) + "," + std::to_string(p) + "," + std::to_string(key.first) + "," +
           std::to_string(key.second) + "," + std::to_string(c) + "\n";
  }
  return out;
}

nlohmann::json FiberCensus::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [key, c] : table) {
    rows.push_back({{"minor_rank", key.first}, {"full_rank", key.second}, {"count", c}});
  }
  return {{"n", n}, {"p", p}, {"table", rows}};
}

mpz_class space_size(int n, int p) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(p),
                static_cast<unsigned long>(SymMatrix::packed_size(n)));
  return out;
}

void require_budget(const mpz_class& required, std::uint64_t budget) {
  mpz_class cap;
  mpz_import(cap.get_mpz_t(), 1, -1, sizeof budget, 0, 0, &budget);
  if (required > cap) {
    throw BudgetExceeded(required, budget);
  }
}

RankHistogram enumerate_rank_counts(int n, const PrimeField& field, std::uint64_t budget) {
  require_size(n);
  const mpz_class size = space_size(n, field.modulus());
  require_budget(size, budget);
  RankHistogram h{n, field.modulus(), std::vector<std::uint64_t>(static_cast<std::size_t>(n + 1))};
  count_range(n, field, 0, size.get_ui(), h.counts);
  return h;
}

std::vector<RankHistogram> partitioned_enumeration(int n, const PrimeField& field, int parts,
                                                   std::uint64_t budget, unsigned threads) {
  require_size(n);
  if (parts < 1) {
    throw InvalidArgument("parts must be >= 1, got " + std::to_string(parts));
  }
  const mpz_class size = space_size(n, field.modulus());
  require_budget(size, budget);

  const auto p = static_cast<std::uint64_t>(field.modulus());
  const std::size_t slots = SymMatrix::packed_size(n);
  std::size_t prefix_len = 0;
  std::uint64_t prefixes = 1;
  while (prefixes < static_cast<std::uint64_t>(parts) && prefix_len < slots) {
    prefixes *= p;
    ++prefix_len;
  }
  const std::uint64_t block = ipow(p, slots - prefix_len);

  std::vector<RankHistogram> out(static_cast<std::size_t>(parts));
  run_parts(out.size(), threads, [&](std::size_t i) {
    const std::uint64_t first = prefixes * i / static_cast<std::uint64_t>(parts);
    const std::uint64_t last = prefixes * (i + 1) / static_cast<std::uint64_t>(parts);
    RankHistogram& h = out[i];
    h.n = n;
    h.p = field.modulus();
    h.counts.assign(static_cast<std::size_t>(n + 1), 0);
    count_range(n, field, first * block, last * block, h.counts);
  });
  return out;
}

RankHistogram merge(std::span<const RankHistogram> parts) {
  if (parts.empty()) {
    throw InvalidArgument("nothing to merge");
  }
  RankHistogram out{parts.front().n, parts.front().p,
                    std::vector<std::uint64_t>(parts.front().counts.size(), 0)};
  for (const auto& h : parts) {
    if (h.n != out.n || h.p != out.p || h.counts.size() != out.counts.size()) {
      throw InvalidArgument("cannot merge histograms of different shapes");
    }
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
      out.counts[k] += h.counts[k];
    }
  }
  return out;
}

RankHistogram parallel_rank_counts(int n, const PrimeField& field, unsigned threads,
                                   std::uint64_t budget) {
  if (threads <= 1) {
    return enumerate_rank_counts(n, field, budget);
  }
  const auto parts = partitioned_enumeration(n, field, static_cast<int>(threads) * 4, budget,
                                             threads);
  return merge(parts);
}

std::map<int, std::uint64_t> completions_census(const SymMatrix& minor, const PrimeField& field,
                                                std::uint64_t budget) {
  const int n = minor.size() + 1;
  mpz_class required;
  mpz_ui_pow_ui(required.get_mpz_t(), static_cast<unsigned long>(field.modulus()),
                static_cast<unsigned long>(n));
  require_budget(required, budget);

  const auto cells = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  std::vector<Word> dense(cells, 0);
  std::vector<Word> work(cells, 0);
  for (int i = 1; i < n; ++i) {
    for (int j = 1; j < n; ++j) {
      dense[static_cast<std::size_t>(i * n + j)] = minor.at(i - 1, j - 1);
    }
  }
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n + 1), 0);
  count_completions(n, field, dense, work, counts);

  std::map<int, std::uint64_t> out;
  for (std::size_t s = 0; s < counts.size(); ++s) {
    if (counts[s] != 0) {
      out.emplace(static_cast<int>(s), counts[s]);
    }
  }
  return out;
}

FiberCensus fiber_census(int n, const PrimeField& field, std::uint64_t budget, unsigned threads) {
  if (n < 1) {
    throw InvalidArgument("fiber census needs n >= 1, got " + std::to_string(n));
  }
  require_budget(space_size(n, field.modulus()), budget);

  const int m = n - 1;
  const std::uint64_t minors = space_size(m, field.modulus()).get_ui();
  const auto cells = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::uint64_t>(minors, threads * 4ULL));

  // Per chunk: joint[r * (n + 1) + s].
  std::vector<std::vector<std::uint64_t>> joint(
      chunks, std::vector<std::uint64_t>(static_cast<std::size_t>(n * (n + 1)), 0));
  run_parts(chunks, threads, [&](std::size_t c) {
    const std::uint64_t first = minors * c / chunks;
    const std::uint64_t last = minors * (c + 1) / chunks;
    if (first == last) {
      return;
    }
    // The minor's packed slots live at offset (1,1) of the n x n buffer.
    auto positions = packed_positions(m);
    for (auto& [i, j] : positions) {
      ++i;
      ++j;
    }
    std::vector<Word> dense(cells, 0);
    std::vector<Word> work(cells, 0);
    std::vector<Word> minor_work(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(n + 1));
    Odometer odo(std::move(positions), n, field.modulus());
    odo.seek(first, dense.data());
    for (std::uint64_t idx = first; idx < last; ++idx) {
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          minor_work[static_cast<std::size_t>(i * m + j)] =
              dense[static_cast<std::size_t>((i + 1) * n + j + 1)];
        }
      }
      const int r = eliminate(minor_work.data(), m, m, field);
      std::fill(counts.begin(), counts.end(), 0);
      count_completions(n, field, dense, work, counts);
      for (int s = 0; s <= n; ++s) {
        joint[c][static_cast<std::size_t>(r * (n + 1) + s)] += counts[static_cast<std::size_t>(s)];
      }
      odo.advance(dense.data());
    }
  });

  FiberCensus census{n, field.modulus(), {}};
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s <= n; ++s) {
      std::uint64_t total = 0;
      for (const auto& part : joint) {
        total += part[static_cast<std::size_t>(r * (n + 1) + s)];
      }
      if (total != 0) {
        census.table.emplace(std::make_pair(r, s), total);
      }
    }
  }
  return census;
}

std::uint64_t projective_count(int n, const PrimeField& field, std::uint64_t budget,
                               unsigned threads) {
  if (n < 1) {
    throw InvalidArgument("projective count needs n >= 1, got " + std::to_string(n));
  }
  const RankHistogram h = parallel_rank_counts(n, field, threads, budget);
  const std::uint64_t full = h.counts[static_cast<std::size_t>(n)];
  const auto units = static_cast<std::uint64_t>(field.modulus() - 1);
  if (full % units != 0) {
    throw NonintegralQuotient(std::to_string(full) + " full-rank matrices are not divisible by " +
                              std::to_string(units));
  }
  return full / units;
}

} // namespace symrank
