#include "tempora/engagement.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

namespace tempora {

std::string to_string(const RetrainPolicy& p) {
    switch (p.kind) {
        case RetrainPolicy::Kind::Immediate: return "immediate";
        case RetrainPolicy::Kind::Never: return "never";
        case RetrainPolicy::Kind::Every:
            return "every:" + std::to_string(p.interval_ms) + "ms";
    }
    return "immediate";
}

RetrainPolicy retrain_policy_from_string(const std::string& s) {
    if (s == "immediate") return RetrainPolicy::immediate();
    if (s == "never") return RetrainPolicy::never();
    if (s.rfind("every:", 0) == 0) {
        std::string body = s.substr(6);
        if (!body.empty() && body.back() == 'd') {
            const double days = std::stod(body.substr(0, body.size() - 1));
            return RetrainPolicy::every(static_cast<std::int64_t>(days * 86400.0 * 1000.0));
        }
        if (body.size() > 2 && body.substr(body.size() - 2) == "ms") {
            return RetrainPolicy::every(std::stoll(body.substr(0, body.size() - 2)));
        }
    }
    throw ParseError("bad retrain policy: '" + s + "'");
}

EngagementModel::EngagementModel(std::string worker_id, CategorySet categories,
                                 RetrainPolicy policy, std::uint64_t seed,
                                 std::size_t hidden_units)
    : worker_id_(std::move(worker_id)),
      categories_(std::move(categories)),
      policy_(policy),
      init_seed_(seed),
      hidden_units_(hidden_units),
      net_(FeatureVector::dimension(categories_.size()), hidden_units, seed) {
    batch_.dim = FeatureVector::dimension(categories_.size());
}

FeatureVector EngagementModel::encode(const Task& task) {
    const auto it = completed_by_requester_.find(task.requester_id);
    const double prior = it == completed_by_requester_.end()
                             ? 0.0
                             : static_cast<double>(it->second);
    return encode_features(task, prior, norm_, categories_);
}

void EngagementModel::train(const TrainConfig& config) {
    if (batch_.rows() == 0) throw ColdStart("train: empty training set");
    net_ = FeedForwardNet(FeatureVector::dimension(categories_.size()), hidden_units_,
                          init_seed_);
    adam_.reset(net_.param_count());
    std::vector<double> grad(net_.param_count());
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        net_.mse_and_gradient(batch_, grad);
        adam_step(net_.params(), grad, adam_, config);
    }
    final_mse_ = net_.mse(batch_);
    trained_ = true;
}

bool EngagementModel::update_on_event(const InteractionRecord& record,
                                      const Task& task, TimestampMs now,
                                      const TrainConfig& config) {
    const FeatureVector f = encode(task);
    batch_.add(f.values, record.label);
    appended_since_refresh_ += 1;

    bool triggered = false;
    switch (policy_.kind) {
        case RetrainPolicy::Kind::Never:
            break;
        case RetrainPolicy::Kind::Immediate:
            if (record.outcome == Outcome::Completed &&
                !seen_categories_.count(task.category)) {
                triggered = true;
            }
            if (appended_since_refresh_ >= kImmediateRefreshInterval) triggered = true;
            break;
        case RetrainPolicy::Kind::Every:
            triggered = trained_ && (now - last_retrain_ms_) >= policy_.interval_ms;
            break;
    }

    if (record.outcome == Outcome::Completed) {
        seen_categories_.insert(task.category);
        completed_by_requester_[task.requester_id] += 1;
    }

    if (!triggered || batch_.rows() < kColdStartMinRecords) return false;
    train(config);
    last_retrain_ms_ = now;
    appended_since_refresh_ = 0;
    return true;
}

bool EngagementModel::maybe_bootstrap(TimestampMs now, const TrainConfig& config) {
    if (trained_ || batch_.rows() < kColdStartMinRecords) return false;
    train(config);
    last_retrain_ms_ = now;
    appended_since_refresh_ = 0;
    return true;
}

double EngagementModel::predict(const FeatureVector& features) const {
    if (!trained_) throw ColdStart("predict on untrained model " + worker_id_);
    return net_.predict(features.values);
}

bool EngagementModel::operator==(const EngagementModel& other) const {
    return worker_id_ == other.worker_id_ &&
           categories_.names() == other.categories_.names() &&
           policy_ == other.policy_ && net_ == other.net_ &&
           batch_.x == other.batch_.x && batch_.y == other.batch_.y &&
           trained_ == other.trained_;
}

namespace {

bool ranks_before(const ScoredTask& a, const ScoredTask& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.task.posted_at != b.task.posted_at) return a.task.posted_at > b.task.posted_at;
    return a.task.task_id < b.task.task_id;
}

}  // namespace

std::vector<ScoredTask> rank(EngagementModel& model, std::span<const Task> candidates) {
    if (!model.ready()) throw ColdStart("rank on untrained model " + model.worker_id());

    // Observe every candidate before encoding so candidate order cannot
    // change the min-max scaling.
    for (const auto& t : candidates) {
        const auto it = model.completed_by_requester_.find(t.requester_id);
        const double prior =
            it == model.completed_by_requester_.end() ? 0.0 : double(it->second);
        model.norm_.observe(t, prior);
    }
    std::vector<ScoredTask> out;
    out.reserve(candidates.size());
    for (const auto& t : candidates) {
        const FeatureVector f = model.encode(t);
        out.push_back({t, model.predict(f)});
    }
    std::sort(out.begin(), out.end(), ranks_before);
    return out;
}

void PopularityCounts::record_completion(const std::string& category) {
    by_category_[category] += 1;
}

std::int64_t PopularityCounts::count(const std::string& category) const {
    const auto it = by_category_.find(category);
    return it == by_category_.end() ? 0 : it->second;
}

PopularityCounts PopularityCounts::from_history(
    std::span<const InteractionRecord> history, const TaskIndex& tasks) {
    PopularityCounts counts;
    for (const auto& r : history) {
        if (r.outcome != Outcome::Completed) continue;
        if (const Task* t = tasks.find(r.task_id)) counts.record_completion(t->category);
    }
    return counts;
}

std::vector<ScoredTask> popularity_baseline_rank(std::span<const Task> candidates,
                                                 const PopularityCounts& counts) {
    std::vector<ScoredTask> out;
    out.reserve(candidates.size());
    for (const auto& t : candidates) {
        out.push_back({t, static_cast<double>(counts.count(t.category))});
    }
    std::sort(out.begin(), out.end(), ranks_before);
    return out;
}

std::vector<ScoredTask> popularity_baseline_rank(
    std::span<const Task> candidates, std::span<const InteractionRecord> global_history,
    const TaskIndex& tasks) {
    return popularity_baseline_rank(candidates,
                                    PopularityCounts::from_history(global_history, tasks));
}

// ---------------------------------------------------------------------------
// Snapshot format v1 (line-oriented text, doubles as C hexfloats):
//
//   tempora-engagement-model v1
//   worker <id>
//   policy <string>
//   hidden <n>
//   categories <n> <name>...
//   params <n> <hexfloat>...
//   adam <step> <n> <m...> <v...>
//   norm <8 ranges as: seen lo hi>...
//   trained <0|1> <final_mse> <last_retrain_ms> <since_refresh>
//   seen <n> <category>...
//   requesters <n> (<id> <count>)...
//   batch <rows> <dim>
//   row <features...> <label>      (one per row)
//   end
// ---------------------------------------------------------------------------

namespace {

std::string hexd(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_hexd(const std::string& s) {
    return std::strtod(s.c_str(), nullptr);
}

std::istringstream expect_line(std::istream& in, const char* tag) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(std::string("model snapshot: missing '") + tag + "' line");
    }
    std::istringstream ss(line);
    std::string head;
    ss >> head;
    if (head != tag) {
        throw ParseError(std::string("model snapshot: expected '") + tag + "', got '" +
                         head + "'");
    }
    return ss;
}

}  // namespace

void EngagementModel::save(std::ostream& out) const {
    out << "tempora-engagement-model v1\n";
    out << "worker " << worker_id_ << "\n";
    out << "policy " << to_string(policy_) << "\n";
    out << "seed " << init_seed_ << "\n";
    out << "hidden " << hidden_units_ << "\n";
    out << "categories " << categories_.size();
    for (const auto& c : categories_.names()) out << ' ' << c;
    out << "\n";
    out << "params " << net_.param_count();
    for (double w : net_.params()) out << ' ' << hexd(w);
    out << "\n";
    out << "adam " << adam_.step << ' ' << adam_.m.size();
    for (double m : adam_.m) out << ' ' << hexd(m);
    for (double v : adam_.v) out << ' ' << hexd(v);
    out << "\n";
    out << "norm";
    for (const auto* r : {&norm_.payment_per_task, &norm_.payment_per_batch,
                          &norm_.prior_tasks, &norm_.duration}) {
        out << ' ' << (r->seen ? 1 : 0) << ' ' << hexd(r->lo) << ' ' << hexd(r->hi);
    }
    out << "\n";
    out << "trained " << (trained_ ? 1 : 0) << ' ' << hexd(final_mse_) << ' '
        << last_retrain_ms_ << ' ' << appended_since_refresh_ << "\n";
    out << "seen " << seen_categories_.size();
    for (const auto& c : seen_categories_) out << ' ' << c;
    out << "\n";
    out << "requesters " << completed_by_requester_.size();
    for (const auto& [id, n] : completed_by_requester_) out << ' ' << id << ' ' << n;
    out << "\n";
    out << "batch " << batch_.rows() << ' ' << batch_.dim << "\n";
    for (std::size_t r = 0; r < batch_.rows(); ++r) {
        out << "row";
        for (double v : batch_.row(r)) out << ' ' << hexd(v);
        out << ' ' << hexd(batch_.y[r]) << "\n";
    }
    out << "end\n";
}

EngagementModel EngagementModel::load(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "tempora-engagement-model v1") {
        throw ParseError("model snapshot: bad magic line");
    }
    EngagementModel m;
    {
        auto ss = expect_line(in, "worker");
        ss >> m.worker_id_;
    }
    {
        auto ss = expect_line(in, "policy");
        std::string p;
        ss >> p;
        m.policy_ = retrain_policy_from_string(p);
    }
    {
        auto ss = expect_line(in, "seed");
        ss >> m.init_seed_;
    }
    {
        auto ss = expect_line(in, "hidden");
        ss >> m.hidden_units_;
    }
    {
        auto ss = expect_line(in, "categories");
        std::size_t n = 0;
        ss >> n;
        std::vector<std::string> names(n);
        for (auto& c : names) ss >> c;
        m.categories_ = CategorySet(std::move(names));
    }
    m.net_ = FeedForwardNet(FeatureVector::dimension(m.categories_.size()),
                            m.hidden_units_, 0);
    {
        auto ss = expect_line(in, "params");
        std::size_t n = 0;
        ss >> n;
        if (n != m.net_.param_count()) throw ParseError("model snapshot: param count");
        std::string tok;
        for (auto& w : m.net_.params()) {
            ss >> tok;
            w = parse_hexd(tok);
        }
    }
    {
        auto ss = expect_line(in, "adam");
        std::size_t n = 0;
        ss >> m.adam_.step >> n;
        m.adam_.m.resize(n);
        m.adam_.v.resize(n);
        std::string tok;
        for (auto& x : m.adam_.m) { ss >> tok; x = parse_hexd(tok); }
        for (auto& x : m.adam_.v) { ss >> tok; x = parse_hexd(tok); }
    }
    {
        auto ss = expect_line(in, "norm");
        for (auto* r : {&m.norm_.payment_per_task, &m.norm_.payment_per_batch,
                        &m.norm_.prior_tasks, &m.norm_.duration}) {
            int seen = 0;
            std::string lo, hi;
            ss >> seen >> lo >> hi;
            r->seen = seen != 0;
            r->lo = parse_hexd(lo);
            r->hi = parse_hexd(hi);
        }
    }
    {
        auto ss = expect_line(in, "trained");
        int t = 0;
        std::string mse;
        ss >> t >> mse >> m.last_retrain_ms_ >> m.appended_since_refresh_;
        m.trained_ = t != 0;
        m.final_mse_ = parse_hexd(mse);
    }
    {
        auto ss = expect_line(in, "seen");
        std::size_t n = 0;
        ss >> n;
        for (std::size_t i = 0; i < n; ++i) {
            std::string c;
            ss >> c;
            m.seen_categories_.insert(c);
        }
    }
    {
        auto ss = expect_line(in, "requesters");
        std::size_t n = 0;
        ss >> n;
        for (std::size_t i = 0; i < n; ++i) {
            std::string id;
            std::int64_t c = 0;
            ss >> id >> c;
            m.completed_by_requester_[id] = c;
        }
    }
    std::size_t rows = 0;
    {
        auto ss = expect_line(in, "batch");
        ss >> rows >> m.batch_.dim;
    }
    for (std::size_t r = 0; r < rows; ++r) {
        auto ss = expect_line(in, "row");
        std::vector<double> vals(m.batch_.dim);
        std::string tok;
        for (auto& v : vals) { ss >> tok; v = parse_hexd(tok); }
        ss >> tok;
        m.batch_.add(vals, parse_hexd(tok));
    }
    if (!std::getline(in, line) || line != "end") {
        throw ParseError("model snapshot: missing trailer");
    }
    return m;
}

}  // namespace tempora
