#include "tempora/sim_config.hpp"

#include <cstdio>
#include <sstream>

#include "tempora/rng.hpp"

namespace tempora {

ChronotypeBehaviorConfig ExperimentConfig::monochronic_defaults() {
    ChronotypeBehaviorConfig b;
    b.bursts_per_day = 1.0;        // one focused block inside the schedule
    b.burst_minutes_mean = 0.0;    // mono activity spans the schedule window
    b.dwell_minutes_mean = 45.0;
    b.onplatform_share = 0.95;
    b.browse_wake_minutes = 4.0;
    b.preview_prob = 0.40;
    b.base_start_prob = 0.55;
    b.nonpreferred_start_factor = 0.12;
    b.abandon_prob = 0.12;
    b.offplatform_accept_prob = 0.0;  // never accepts work off the platform
    b.notif_click_pref = 0.75;
    b.notif_click_nonpref = 0.12;
    b.max_concurrent_tasks = 1;
    b.preferred_category_count = 2;
    b.speed_sigma_log = 0.2;
    return b;
}

ChronotypeBehaviorConfig ExperimentConfig::polychronic_defaults() {
    ChronotypeBehaviorConfig b;
    b.bursts_per_day = 5.0;
    b.burst_minutes_mean = 55.0;
    b.dwell_minutes_mean = 9.0;
    b.onplatform_share = 0.40;  // rest wanders to other sites / desktop apps
    b.browse_wake_minutes = 5.0;
    b.preview_prob = 0.40;
    b.base_start_prob = 0.55;
    b.nonpreferred_start_factor = 0.12;
    b.abandon_prob = 0.18;
    b.offplatform_accept_prob = 0.6;
    b.notif_click_pref = 0.75;
    b.notif_click_nonpref = 0.12;
    b.max_concurrent_tasks = 3;
    b.preferred_category_count = 3;
    b.speed_sigma_log = 0.3;
    return b;
}

void ExperimentConfig::validate() const {
    if (population.m_cf < 1 || population.p_cf < 1 || population.m_s < 1 ||
        population.p_s < 1) {
        throw ConfigError("population counts must each be >= 1");
    }
    if (stages.pre_test_days < 1 || stages.test_days < 1) {
        throw ConfigError("stage lengths must each be >= 1 day");
    }
    if (market.task_arrival_rate_per_hour <= 0.0) {
        throw ConfigError("task arrival rate must be positive");
    }
    if (market.category_count < 1 || market.requester_count < 1) {
        throw ConfigError("market needs at least one category and requester");
    }
    if (train.learning_rate <= 0.0 || train.epochs < 1) {
        throw ConfigError("bad training config");
    }
    for (const auto* b : {&monochronic, &polychronic}) {
        if (b->max_concurrent_tasks < 1) {
            throw ConfigError("max_concurrent_tasks must be >= 1");
        }
        if (b->preferred_category_count < 1 ||
            b->preferred_category_count > market.category_count) {
            throw ConfigError("preferred_category_count out of range");
        }
    }
    if (dropout.enabled && (dropout.hazard_per_day < 0.0 || dropout.hazard_per_day > 1.0)) {
        throw ConfigError("dropout hazard must be in [0,1]");
    }
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit_behavior(std::ostringstream& out, const char* table,
                   const ChronotypeBehaviorConfig& b) {
    out << "[" << table << "]\n";
    out << "bursts_per_day = " << fmt(b.bursts_per_day) << "\n";
    out << "burst_minutes_mean = " << fmt(b.burst_minutes_mean) << "\n";
    out << "dwell_minutes_mean = " << fmt(b.dwell_minutes_mean) << "\n";
    out << "onplatform_share = " << fmt(b.onplatform_share) << "\n";
    out << "browse_wake_minutes = " << fmt(b.browse_wake_minutes) << "\n";
    out << "preview_prob = " << fmt(b.preview_prob) << "\n";
    out << "base_start_prob = " << fmt(b.base_start_prob) << "\n";
    out << "nonpreferred_start_factor = " << fmt(b.nonpreferred_start_factor) << "\n";
    out << "abandon_prob = " << fmt(b.abandon_prob) << "\n";
    out << "offplatform_accept_prob = " << fmt(b.offplatform_accept_prob) << "\n";
    out << "notif_click_pref = " << fmt(b.notif_click_pref) << "\n";
    out << "notif_click_nonpref = " << fmt(b.notif_click_nonpref) << "\n";
    out << "max_concurrent_tasks = " << b.max_concurrent_tasks << "\n";
    out << "preferred_category_count = " << b.preferred_category_count << "\n";
    out << "speed_sigma_log = " << fmt(b.speed_sigma_log) << "\n";
}

void load_behavior(const toml::Table& t, const std::string& prefix,
                   ChronotypeBehaviorConfig& b) {
    b.bursts_per_day = t.get_double(prefix + ".bursts_per_day", b.bursts_per_day);
    b.burst_minutes_mean =
        t.get_double(prefix + ".burst_minutes_mean", b.burst_minutes_mean);
    b.dwell_minutes_mean =
        t.get_double(prefix + ".dwell_minutes_mean", b.dwell_minutes_mean);
    b.onplatform_share = t.get_double(prefix + ".onplatform_share", b.onplatform_share);
    b.browse_wake_minutes =
        t.get_double(prefix + ".browse_wake_minutes", b.browse_wake_minutes);
    b.preview_prob = t.get_double(prefix + ".preview_prob", b.preview_prob);
    b.base_start_prob = t.get_double(prefix + ".base_start_prob", b.base_start_prob);
    b.nonpreferred_start_factor = t.get_double(prefix + ".nonpreferred_start_factor",
                                               b.nonpreferred_start_factor);
    b.abandon_prob = t.get_double(prefix + ".abandon_prob", b.abandon_prob);
    b.offplatform_accept_prob =
        t.get_double(prefix + ".offplatform_accept_prob", b.offplatform_accept_prob);
    b.notif_click_pref = t.get_double(prefix + ".notif_click_pref", b.notif_click_pref);
    b.notif_click_nonpref =
        t.get_double(prefix + ".notif_click_nonpref", b.notif_click_nonpref);
    b.max_concurrent_tasks = static_cast<int>(
        t.get_int(prefix + ".max_concurrent_tasks", b.max_concurrent_tasks));
    b.preferred_category_count = static_cast<int>(
        t.get_int(prefix + ".preferred_category_count", b.preferred_category_count));
    b.speed_sigma_log = t.get_double(prefix + ".speed_sigma_log", b.speed_sigma_log);
}

}  // namespace

std::string ExperimentConfig::canonical_toml() const {
    std::ostringstream out;
    out << "seed = " << seed << "\n";
    out << "[population]\n";
    out << "m_cf = " << population.m_cf << "\n";
    out << "p_cf = " << population.p_cf << "\n";
    out << "m_s = " << population.m_s << "\n";
    out << "p_s = " << population.p_s << "\n";
    out << "[stages]\n";
    out << "pre_test_days = " << stages.pre_test_days << "\n";
    out << "test_days = " << stages.test_days << "\n";
    out << "[market]\n";
    out << "task_arrival_rate_per_hour = " << fmt(market.task_arrival_rate_per_hour)
        << "\n";
    out << "category_count = " << market.category_count << "\n";
    out << "requester_count = " << market.requester_count << "\n";
    out << "payment_median_usd = " << fmt(market.payment_median_usd) << "\n";
    out << "payment_sigma_log = " << fmt(market.payment_sigma_log) << "\n";
    out << "batch_max_multiple = " << market.batch_max_multiple << "\n";
    out << "duration_median_s = " << fmt(market.duration_median_s) << "\n";
    out << "duration_sigma_log = " << fmt(market.duration_sigma_log) << "\n";
    out << "feed_window_hours = " << fmt(market.feed_window_hours) << "\n";
    out << "training_fraction = " << fmt(market.training_fraction) << "\n";
    out << "exam_fraction = " << fmt(market.exam_fraction) << "\n";
    emit_behavior(out, "behavior.monochronic", monochronic);
    emit_behavior(out, "behavior.polychronic", polychronic);
    out << "[stipend]\n";
    out << "install_micro_usd = " << stipend.install << "\n";
    out << "per_day_micro_usd = " << stipend.per_day << "\n";
    out << "post_survey_micro_usd = " << stipend.post_survey << "\n";
    out << "[engine]\n";
    out << "enabled = " << (engine.enabled ? "true" : "false") << "\n";
    out << "notification_limit = " << engine.notification_limit << "\n";
    out << "scan_interval_minutes = " << fmt(engine.scan_interval_minutes) << "\n";
    out << "poly_hourly_cap = " << engine.poly_hourly_cap << "\n";
    out << "queue_busy = " << (engine.queue_busy ? "true" : "false") << "\n";
    out << "queue_depth = " << engine.queue_depth << "\n";
    out << "[train]\n";
    out << "learning_rate = " << fmt(train.learning_rate) << "\n";
    out << "epochs = " << train.epochs << "\n";
    out << "loss = \"mse\"\n";
    out << "adam_beta1 = " << fmt(train.adam_beta1) << "\n";
    out << "adam_beta2 = " << fmt(train.adam_beta2) << "\n";
    out << "adam_epsilon = " << fmt(train.adam_epsilon) << "\n";
    out << "retrain_policy = \"" << to_string(retrain_policy) << "\"\n";
    out << "[dropout]\n";
    out << "enabled = " << (dropout.enabled ? "true" : "false") << "\n";
    out << "hazard_per_day = " << fmt(dropout.hazard_per_day) << "\n";
    return out.str();
}

std::uint64_t ExperimentConfig::config_hash() const {
    return fnv1a64(canonical_toml());
}

ExperimentConfig ExperimentConfig::from_toml(const toml::Table& t) {
    ExperimentConfig c;
    c.seed = static_cast<std::uint64_t>(t.get_int("seed", static_cast<std::int64_t>(c.seed)));
    c.population.m_cf = static_cast<int>(t.get_int("population.m_cf", c.population.m_cf));
    c.population.p_cf = static_cast<int>(t.get_int("population.p_cf", c.population.p_cf));
    c.population.m_s = static_cast<int>(t.get_int("population.m_s", c.population.m_s));
    c.population.p_s = static_cast<int>(t.get_int("population.p_s", c.population.p_s));
    c.stages.pre_test_days =
        static_cast<int>(t.get_int("stages.pre_test_days", c.stages.pre_test_days));
    c.stages.test_days =
        static_cast<int>(t.get_int("stages.test_days", c.stages.test_days));
    c.market.task_arrival_rate_per_hour = t.get_double(
        "market.task_arrival_rate_per_hour", c.market.task_arrival_rate_per_hour);
    c.market.category_count =
        static_cast<int>(t.get_int("market.category_count", c.market.category_count));
    c.market.requester_count =
        static_cast<int>(t.get_int("market.requester_count", c.market.requester_count));
    c.market.payment_median_usd =
        t.get_double("market.payment_median_usd", c.market.payment_median_usd);
    c.market.payment_sigma_log =
        t.get_double("market.payment_sigma_log", c.market.payment_sigma_log);
    c.market.batch_max_multiple = static_cast<int>(
        t.get_int("market.batch_max_multiple", c.market.batch_max_multiple));
    c.market.duration_median_s =
        t.get_double("market.duration_median_s", c.market.duration_median_s);
    c.market.duration_sigma_log =
        t.get_double("market.duration_sigma_log", c.market.duration_sigma_log);
    c.market.feed_window_hours =
        t.get_double("market.feed_window_hours", c.market.feed_window_hours);
    c.market.training_fraction =
        t.get_double("market.training_fraction", c.market.training_fraction);
    c.market.exam_fraction = t.get_double("market.exam_fraction", c.market.exam_fraction);
    load_behavior(t, "behavior.monochronic", c.monochronic);
    load_behavior(t, "behavior.polychronic", c.polychronic);
    c.stipend.install = t.get_int("stipend.install_micro_usd", c.stipend.install);
    c.stipend.per_day = t.get_int("stipend.per_day_micro_usd", c.stipend.per_day);
    c.stipend.post_survey =
        t.get_int("stipend.post_survey_micro_usd", c.stipend.post_survey);
    c.engine.enabled = t.get_bool("engine.enabled", c.engine.enabled);
    c.engine.notification_limit = static_cast<std::size_t>(
        t.get_int("engine.notification_limit",
                  static_cast<std::int64_t>(c.engine.notification_limit)));
    c.engine.scan_interval_minutes =
        t.get_double("engine.scan_interval_minutes", c.engine.scan_interval_minutes);
    c.engine.poly_hourly_cap =
        static_cast<int>(t.get_int("engine.poly_hourly_cap", c.engine.poly_hourly_cap));
    c.engine.queue_busy = t.get_bool("engine.queue_busy", c.engine.queue_busy);
    c.engine.queue_depth = static_cast<std::size_t>(t.get_int(
        "engine.queue_depth", static_cast<std::int64_t>(c.engine.queue_depth)));
    c.train.learning_rate = t.get_double("train.learning_rate", c.train.learning_rate);
    c.train.epochs = static_cast<int>(t.get_int("train.epochs", c.train.epochs));
    c.train.adam_beta1 = t.get_double("train.adam_beta1", c.train.adam_beta1);
    c.train.adam_beta2 = t.get_double("train.adam_beta2", c.train.adam_beta2);
    c.train.adam_epsilon = t.get_double("train.adam_epsilon", c.train.adam_epsilon);
    if (t.has("train.retrain_policy")) {
        c.retrain_policy =
            retrain_policy_from_string(t.get_string("train.retrain_policy", "immediate"));
    }
    c.dropout.enabled = t.get_bool("dropout.enabled", c.dropout.enabled);
    c.dropout.hazard_per_day =
        t.get_double("dropout.hazard_per_day", c.dropout.hazard_per_day);
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    return from_toml(toml::parse_file(path));
}

}  // namespace tempora
