public class Api {
    public static String join(String... parts) {
        return String.join(",", parts);
    }
}
