public class Api {
    public static void printGreeting() {
        System.out.println("Hello, world");
    }
}
