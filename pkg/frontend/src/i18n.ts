// UI chrome labels. Assistive messages themselves arrive pre-rendered
// from the service; these strings only cover the operator controls.

import type { Lang } from "./protocol.js";

export type Messages = Record<string, string>;

const en: Messages = {
  title: "Walkthrough",
  connect: "Connect",
  connected: "Connected",
  connecting: "Connecting…",
  disconnected: "Disconnected — retrying",
  locate: "Locate",
  navigate: "Navigate",
  emergency: "Emergency",
  temperature: "Temperature",
  occupancy: "Occupancy",
  weather: "Weather",
  destination: "Destination",
  room: "Room",
  language: "Language",
  signal: "Signal",
  messages: "Messages",
  diagnostics: "Diagnostics",
  steeringDisabled: "Steering is disabled (live mode)",
  steeringHint: "Arrow keys move the virtual user",
  truePose: "true pose",
  estimate: "estimate",
  noSignal: "no scan yet",
};

const ar: Messages = {
  title: "جولة افتراضية",
  connect: "اتصال",
  connected: "متصل",
  connecting: "جارٍ الاتصال…",
  disconnected: "انقطع الاتصال — إعادة المحاولة",
  locate: "تحديد الموقع",
  navigate: "التنقل",
  emergency: "طوارئ",
  temperature: "درجة الحرارة",
  occupancy: "الإشغال",
  weather: "الطقس",
  destination: "الوجهة",
  room: "الغرفة",
  language: "اللغة",
  signal: "الإشارة",
  messages: "الرسائل",
  diagnostics: "التشخيص",
  steeringDisabled: "التحكم بالحركة معطل (الوضع الحي)",
  steeringHint: "مفاتيح الأسهم تحرك المستخدم الافتراضي",
  truePose: "الموقع الحقيقي",
  estimate: "الموقع المقدر",
  noSignal: "لا يوجد مسح بعد",
};

const catalogues: Record<Lang, Messages> = { en, ar };

export function t(lang: Lang, key: string): string {
  return catalogues[lang][key] ?? key;
}

export function labelKeys(): string[] {
  return Object.keys(en);
}

export function hasLabel(lang: Lang, key: string): boolean {
  return key in catalogues[lang];
}

export function isRTL(lang: string): boolean {
  return lang === "ar";
}
