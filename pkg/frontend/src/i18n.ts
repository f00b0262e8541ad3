// Bilingual UI strings. Nepali is the default; the choice persists locally.

import type { KeyValueStore } from "./storage.js";

export type Locale = "ne" | "en";

export type I18nKey =
  | "app.title"
  | "app.tagline"
  | "action.chooseImage"
  | "action.detect"
  | "action.detecting"
  | "action.sync"
  | "action.submitFeedback"
  | "action.toggleLanguage"
  | "status.offline"
  | "status.online"
  | "status.noDisease"
  | "status.detectFailed"
  | "status.kbSynced"
  | "status.kbSyncFailed"
  | "status.feedbackQueued"
  | "status.feedbackSent"
  | "status.feedbackFlushed"
  | "status.feedbackRejected"
  | "section.symptoms"
  | "section.prevention"
  | "section.remedy"
  | "kb.browserTitle"
  | "kb.draftNotice"
  | "kb.noRemedy"
  | "feedback.markWrong"
  | "feedback.actualDisease"
  | "feedback.noDiseaseOption"
  | "feedback.comment";

const NE: Record<I18nKey, string> = {
  "app.title": "गोलभेडा रोग सल्लाहकार",
  "app.tagline": "पातको फोटोबाट रोग पहिचान र उपचार सल्लाह",
  "action.chooseImage": "फोटो छान्नुहोस्",
  "action.detect": "रोग जाँच गर्नुहोस्",
  "action.detecting": "जाँच हुँदैछ…",
  "action.sync": "ज्ञान आधार अद्यावधिक गर्नुहोस्",
  "action.submitFeedback": "सच्याइ पठाउनुहोस्",
  "action.toggleLanguage": "English",
  "status.offline": "अफलाइन — बचत गरिएको ज्ञान आधारबाट हेर्न सकिन्छ",
  "status.online": "अनलाइन",
  "status.noDisease": "कुनै रोग फेला परेन",
  "status.detectFailed": "जाँच असफल भयो",
  "status.kbSynced": "ज्ञान आधार अद्यावधिक भयो (संस्करण {version})",
  "status.kbSyncFailed": "अद्यावधिक भएन — पुरानै प्रति कायम छ",
  "status.feedbackQueued": "अफलाइन: सच्याइ लाइनमा राखियो ({count})",
  "status.feedbackSent": "सच्याइ पठाइयो (id {id})",
  "status.feedbackFlushed": "लाइनमा रहेका सच्याइ पठाइए: {count}",
  "status.feedbackRejected": "सर्भरले अस्वीकार गर्‍यो: {message}",
  "section.symptoms": "लक्षणहरू",
  "section.prevention": "रोकथाम",
  "section.remedy": "उपचार",
  "kb.browserTitle": "रोग ज्ञान आधार",
  "kb.draftNotice": "यो प्रविष्टि अझै मस्यौदा अवस्थामा छ",
  "kb.noRemedy": "यस वर्गका लागि उपचार परिभाषित छैन",
  "feedback.markWrong": "यो पहिचान गलत छ",
  "feedback.actualDisease": "वास्तविक रोग",
  "feedback.noDiseaseOption": "कुनै रोग छैन",
  "feedback.comment": "टिप्पणी",
};

const EN: Record<I18nKey, string> = {
  "app.title": "Tomato Disease Advisor",
  "app.tagline": "Detect leaf diseases from a photo and get treatment advice",
  "action.chooseImage": "Choose photo",
  "action.detect": "Detect disease",
  "action.detecting": "Detecting…",
  "action.sync": "Update knowledge base",
  "action.submitFeedback": "Send correction",
  "action.toggleLanguage": "नेपाली",
  "status.offline": "Offline — browsing the saved knowledge base",
  "status.online": "Online",
  "status.noDisease": "No disease detected",
  "status.detectFailed": "Detection failed",
  "status.kbSynced": "Knowledge base updated (version {version})",
  "status.kbSyncFailed": "Update failed — keeping the existing copy",
  "status.feedbackQueued": "Offline: correction queued ({count})",
  "status.feedbackSent": "Correction sent (id {id})",
  "status.feedbackFlushed": "Queued corrections delivered: {count}",
  "status.feedbackRejected": "Rejected by the server: {message}",
  "section.symptoms": "Symptoms",
  "section.prevention": "Prevention",
  "section.remedy": "Remedy",
  "kb.browserTitle": "Disease knowledge base",
  "kb.draftNotice": "This entry is still a draft",
  "kb.noRemedy": "No remedy is defined for this class",
  "feedback.markWrong": "This finding is wrong",
  "feedback.actualDisease": "Actual disease",
  "feedback.noDiseaseOption": "No disease",
  "feedback.comment": "Comment",
};

const STRINGS: Record<Locale, Record<I18nKey, string>> = { ne: NE, en: EN };

const LOCALE_KEY = "tomatodet.locale";

export class I18n {
  private current: Locale;

  constructor(private readonly store: KeyValueStore) {
    const saved = store.getItem(LOCALE_KEY);
    this.current = saved === "en" || saved === "ne" ? saved : "ne";
  }

  get locale(): Locale {
    return this.current;
  }

  setLocale(locale: Locale): void {
    this.current = locale;
    this.store.setItem(LOCALE_KEY, locale);
  }

  toggle(): Locale {
    this.setLocale(this.current === "ne" ? "en" : "ne");
    return this.current;
  }

  t(key: I18nKey, params?: Record<string, string | number>): string {
    let text = STRINGS[this.current][key];
    if (params) {
      for (const [name, value] of Object.entries(params)) {
        text = text.replaceAll(`{${name}}`, String(value));
      }
    }
    return text;
  }
}

/**
 * Pick the display name for a disease entry in one locale. Entry content
 * sections are authored in Nepali only; English display falls back to the
 * Nepali name when no English name exists, but a single section never mixes
 * sources.
 */
export function entryDisplayName(
  entry: { name_ne: string; name_en?: string | null },
  locale: Locale,
): string {
  if (locale === "en" && entry.name_en) return entry.name_en;
  return entry.name_ne;
}
